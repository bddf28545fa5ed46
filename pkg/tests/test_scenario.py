import pytest

from aacplan.errors import ParseError, ValidationError
from aacplan.scenario import (
    BUNDLED,
    build_world,
    bundled_scenario,
    dump_scenario,
    loads_scenario,
    parse_scenario,
)

MINIMAL = """
transformations:
  - {id: g2t, source: HandGesture, target: Text, accuracy: 0.86}
profiles:
  - {id: a, produces: [HandGesture]}
  - {id: b, perceives: [Text]}
"""


@pytest.mark.parametrize("name", BUNDLED)
def test_bundled_scenarios_round_trip(name):
    scn = parse_scenario(bundled_scenario(name))
    again = loads_scenario(dump_scenario(scn))
    assert again == scn
    assert dump_scenario(again) == dump_scenario(scn)


def test_defaults_filled():
    scn = loads_scenario(MINIMAL + """
adaptation:
  - {user: a, transformation: g2t}
checkpoint:
  points:
    - {index: 1, name: Interviewing, plan_ref: [g2t]}
""")
    assert (scn.objective.w_acc, scn.objective.w_lat, scn.objective.w_cost) == (1.0, 0.0, 0.0)
    assert scn.adaptation[0].prior == 0.5
    assert scn.adaptation[0].tau == 0.02
    assert scn.checkpoint.points[0].retry_boost == 0.05
    assert scn.checkpoint.seed == 0


def test_empty_file_is_parse_error():
    with pytest.raises(ParseError):
        loads_scenario("")
    with pytest.raises(ParseError):
        loads_scenario("# only a comment\n")


def test_malformed_yaml_reports_line():
    with pytest.raises(ParseError) as exc:
        loads_scenario("transformations:\n  - {id: x, source: [\n")
    assert exc.value.line is not None


def test_unknown_trait_names_the_profile():
    with pytest.raises(ValidationError) as exc:
        loads_scenario(MINIMAL.replace("produces: [HandGesture]", "produces: [Unicorn]"))
    assert "'a'" in str(exc.value) and "Unicorn" in str(exc.value)
    assert exc.value.path == "profiles[0].produces"


def test_unknown_key_rejected():
    with pytest.raises(ValidationError) as exc:
        loads_scenario(MINIMAL + "objectve: {w_acc: 1}\n")
    assert "objectve" in exc.value.path


def test_accuracy_xor_topk_ref():
    with pytest.raises(ValidationError):
        loads_scenario(MINIMAL.replace("accuracy: 0.86", "accuracy: 0.86, topk_ref: {model: I3D}"))
    scn = loads_scenario(MINIMAL.replace("accuracy: 0.86", "topk_ref: {model: I3D, k: 5}"))
    assert build_world(scn).catalog["g2t"].accuracy == pytest.approx(0.5731)


def test_topk_default_is_top1():
    scn = loads_scenario(MINIMAL.replace("accuracy: 0.86", "topk_ref: {model: I3D}"))
    assert build_world(scn).catalog["g2t"].accuracy == pytest.approx(0.3248)


@pytest.mark.parametrize("patch, where", [
    (("accuracy: 0.86", "accuracy: 1.5"), "transformations[0].accuracy"),
    (("target: Text", "target: Nowhere"), "transformations[0].target"),
    (("{id: b, perceives: [Text]}", "{id: a, perceives: [Text]}"), "profiles[1]"),
])
def test_validation_paths(patch, where):
    text = MINIMAL.replace(*patch)
    with pytest.raises(ValidationError) as exc:
        loads_scenario(text)
    assert exc.value.path == where


def test_cross_reference_errors():
    bad = [
        MINIMAL + "team: [a, zed]\n",
        MINIMAL.replace("{id: a, produces: [HandGesture]}", "{id: a, produces: [HandGesture], overrides: {nope: 0.5}}"),
        MINIMAL + "adaptation:\n  - {user: a, transformation: g2t, mode: ContextRule, context_bias: dusk}\n",
        MINIMAL + "checkpoint:\n  points:\n    - {index: 1, name: Interviewing, plan_ref: [zzz]}\n",
        MINIMAL + "checkpoint:\n  points:\n    - {index: 1, name: Interviewing, sender: a}\n",
        MINIMAL + "checkpoint:\n  points:\n    - {index: 2, name: Interviewing, plan_ref: [g2t]}\n"
                  "    - {index: 1, name: BodyScreening, plan_ref: [g2t]}\n",
        MINIMAL + "grid:\n  rows: [{label: A}]\n  cols: [{label: '1', cost: 1}]\n  cells: [{row: B, col: '1', score: 1}]\n",
        MINIMAL + "objective: {w_acc: 0}\n",
        MINIMAL + "register_extensions:\n  - {name: Text, category: I, modality: textual}\n",
    ]
    for text in bad:
        with pytest.raises(ValidationError):
            loads_scenario(text)


def test_register_extension_usable():
    scn = loads_scenario(MINIMAL + """
register_extensions:
  - {name: SyntheticEmotion, category: I, base_kind: EmotionalState, modality: visual}
""")
    w = build_world(scn)
    assert "SyntheticEmotion" in w.register


def test_context_tags_resolve(border):
    est = border.estimates()[("traveller", "gesture_to_text")]
    assert est.context_bias == -0.05
    trav = border.traveller()
    assert trav.overrides["gesture_to_text"] == pytest.approx(0.81)


def test_border_pipeline(border):
    pts = border.pipeline()
    assert [p.index for p in pts] == [1, 2, 3, 4, 5, 6]
    assert pts[1].plan.stages == ("gesture_to_text",)
    assert pts[2].plan.stages == ("speech_to_text", "text_to_gesture", "gesture_to_avatar")


def test_missing_file():
    with pytest.raises(ParseError):
        parse_scenario("/nonexistent/file.scenario")


def test_readme_example_validates():
    import re
    from pathlib import Path
    text = (Path(__file__).resolve().parents[1] / "README.md").read_text()
    block = re.search(r"```yaml\n(.*?)```", text, re.S).group(1)
    w = build_world(loads_scenario(block))
    assert len(w.pipeline()) == 2
