"""Core tutor types: state validation, step semantics, demos."""

import pytest

from dipl.core import (
    BUTTON,
    AdjacencyRelation,
    Demo,
    InterfaceElement,
    PRESS_BUTTON,
    SAI,
    TEXT_FIELD,
    TutorEnvironment,
    TutorState,
    UPDATE_FIELD,
    symmetric_relations,
    validate_state,
)


def _tiny_state():
    elements = [
        InterfaceElement("a", TEXT_FIELD, "3", True, 0, 0),
        InterfaceElement("b", TEXT_FIELD, "", False, 0, 1),
        InterfaceElement("go", BUTTON, "", False, 0, 2),
    ]
    relations = symmetric_relations([("a", "left", "b"), ("b", "left", "go")])
    return TutorState(elements, relations)


class TinyEnv(TutorEnvironment):
    """b must be set to "7", then go."""

    def new_problem(self):
        self.state = _tiny_state()
        return None, self.state

    def _admissible(self):
        if self.state.element("b").value == "":
            return [SAI("b", UPDATE_FIELD, "7")]
        return [SAI("go", PRESS_BUTTON, "")]


def test_validate_clean_state():
    assert validate_state(_tiny_state()) == []


def test_validate_duplicate_and_dangling():
    state = _tiny_state()
    state.elements.append(InterfaceElement("a", TEXT_FIELD, "1", True))
    state.relations.append(AdjacencyRelation("zzz", "left", "a"))
    violations = validate_state(state)
    assert any("duplicate" in v for v in violations)
    assert any("dangling" in v for v in violations)
    # the dangling one-way relation also lacks its inverse
    assert any("missing inverse" in v for v in violations)


def test_validate_button_constraints():
    state = _tiny_state()
    state.element("go").locked = True
    assert any("button" in v for v in validate_state(state))


def test_locked_empty_is_a_disabled_control_not_a_violation():
    state = _tiny_state()
    state.element("b").locked = True  # disabled, still empty
    assert validate_state(state) == []


def test_symmetric_relations_closure():
    rels = symmetric_relations([("x", "above", "y")])
    assert AdjacencyRelation("x", "above", "y") in rels
    assert AdjacencyRelation("y", "below", "x") in rels
    assert len(rels) == 2


def test_to_text_stable():
    s1, s2 = _tiny_state(), _tiny_state()
    assert s1.to_text() == s2.to_text()
    s2.element("b").value = "7"
    assert s1.to_text() != s2.to_text()


def test_step_semantics():
    env = TinyEnv(0)
    env.new_problem()
    with pytest.raises(KeyError):
        env.step(SAI("nope", UPDATE_FIELD, "1"))
    # locked element
    assert env.step(SAI("a", UPDATE_FIELD, "9"))[0] == -1
    # admissible but wrong value
    assert env.step(SAI("b", UPDATE_FIELD, "8"))[0] == -1
    assert env.state.element("b").value == ""  # -1 leaves state unchanged
    reward, state = env.step(SAI("b", UPDATE_FIELD, "7"))
    assert reward == 1 and state.element("b").locked
    assert not env.done
    assert env.step(SAI("go", PRESS_BUTTON, ""))[0] == 1
    assert env.done


def test_request_demo_first_admissible_and_done_error():
    env = TinyEnv(0)
    env.new_problem()
    demo = env.request_demo()
    assert isinstance(demo, Demo)
    assert demo.sai == SAI("b", UPDATE_FIELD, "7")
    env.step(demo.sai)
    env.step(SAI("go", PRESS_BUTTON, ""))
    with pytest.raises(RuntimeError):
        env.request_demo()
