import pytest

from fatgate.dispatch import FLOAT_LIKE
from fatgate.errors import BadIndexError, DuplicateNameError, NotFoundError
from fatgate.registry import (
    IndexSegment,
    MetaSegment,
    NameSegment,
    Path,
    Request,
    Response,
    TypeDescriptor,
    attribute_of,
    normalize_args,
)
from fatgate.value import Value, parse, serialize

num = Value.number
text = Value.string

# child tables enumerated from the demo registration (the @list oracle)
MODEL_CHILDREN = {"t", "dt", "group", "reset", "step", "exportEquations", "classifyOp"}
GROUP_CHILDREN = {"name", "items", "numItems", "addVariable", "addOperation"}


def ok(resp: Response) -> Value:
    assert resp.ok, f"{resp.code}: {resp.message}"
    return resp.value


# -- Path grammar --------------------------------------------------------------


def test_path_parse_names_and_metas():
    p = Path.parse("/model/group/items/@elem/0/@type")
    assert p.segments == (
        NameSegment("model"),
        NameSegment("group"),
        NameSegment("items"),
        MetaSegment("@elem"),
        IndexSegment(0),
        MetaSegment("@type"),
    )
    assert str(p) == "/model/group/items/@elem/0/@type"


def test_path_parse_root_and_slashes():
    assert Path.parse("/").segments == ()
    assert Path.parse("").segments == ()
    assert Path.parse("//model//t/") == Path.parse("/model/t")


@pytest.mark.parametrize("bad", ["/model/@elem/x", "/items/@elem/-1", "/items/@elem"])
def test_path_non_integer_elem_index_is_bad_index(bad):
    with pytest.raises(BadIndexError):
        Path.parse(bad)


@pytest.mark.parametrize("bad", ["/model/@wat", "/9lives", "/a-b", "/model/0"])
def test_path_invalid_segments_are_not_found(bad):
    with pytest.raises(NotFoundError):
        Path.parse(bad)


# -- normalize_args ------------------------------------------------------------


def test_normalize_args():
    assert normalize_args(None) == ()
    assert normalize_args(parse('["foo.tex", true]')) == (
        text("foo.tex"),
        Value.boolean(True),
    )
    assert normalize_args(num(42)) == (num(42),)


# -- process: the timestep read/update scenario ---------------------------------


def test_attribute_read_write_read(demo):
    reg, _ = demo
    assert ok(reg.process_text("/model/t")) == num(0)
    assert ok(reg.process_text("/model/t", "10.2")) == num(10.2)
    assert ok(reg.process_text("/model/t")) == num(10.2)


def test_attribute_set_then_get_is_exact(demo):
    reg, _ = demo
    for raw in ("0.1", "123456.789", "-0.25"):
        ok(reg.process_text("/model/t", raw))
        assert serialize(ok(reg.process_text("/model/t"))) == raw


def test_body_presence_selects_read_vs_update(demo):
    reg, model = demo
    before = ok(reg.process_text("/model/t"))
    assert ok(reg.process_text("/model/t")) == before  # read is repeatable
    ok(reg.process_text("/model/t", "5"))
    assert model.t == 5.0  # any body means update


def test_attribute_type_mismatch_is_malformed_input(demo):
    reg, _ = demo
    resp = reg.process_text("/model/t", '"ten"')
    assert resp.code == "MalformedInput"


def test_attribute_setter_invariant_violation_is_internal(demo):
    reg, _ = demo
    resp = reg.process_text("/model/dt", "-1")
    assert resp.code == "Internal"
    assert "dt must be > 0" in resp.message


# -- process: methods ------------------------------------------------------------


def test_method_call_via_body_array(demo):
    reg, model = demo
    result = ok(reg.process_text("/model/step", "[3]"))
    assert abs(result.as_number() - 0.3) < 1e-12
    assert model.t == result.as_number()


def test_zero_arg_method_call_with_no_body(demo):
    reg, model = demo
    ok(reg.process_text("/model/step"))
    assert model.t == pytest.approx(0.1)
    ok(reg.process_text("/model/reset"))
    assert model.t == 0.0


def test_method_no_match_propagates(demo):
    reg, _ = demo
    assert reg.process_text("/model/step", '["x"]').code == "NoMatch"


def test_method_error_propagates_as_internal(demo):
    reg, _ = demo
    assert reg.process_text("/model/step", "[0]").code == "Internal"


# -- process: whole-object reads and updates -------------------------------------


def test_whole_object_read_is_recursive_and_method_free(demo):
    reg, _ = demo
    v = ok(reg.process_text("/model"))
    assert serialize(v) == '{"t":0,"dt":0.1,"group":{"name":"root","items":[]}}'


def test_whole_object_put_get_round_trip_is_noop(demo):
    reg, _ = demo
    ok(reg.process_text("/model/group/addVariable", '["x", 5]'))
    ok(reg.process_text("/model/step"))
    for path in ("/model", "/model/group"):
        snapshot = ok(reg.process_text(path))
        after = ok(reg.process(Request(Path.parse(path), snapshot)))
        assert after == snapshot
        assert ok(reg.process_text(path)) == snapshot


def test_whole_object_put_assigns_only_present_keys(demo):
    reg, model = demo
    ok(reg.process_text("/model", '{"t": 4}'))
    assert model.t == 4.0
    assert model.dt == 0.1


def test_whole_object_put_rejects_unknown_keys(demo):
    reg, _ = demo
    resp = reg.process_text("/model", '{"typo": 1}')
    assert resp.code == "MalformedInput"
    assert "typo" in resp.message


def test_whole_object_put_rejects_method_keys(demo):
    reg, _ = demo
    assert reg.process_text("/model", '{"reset": 1}').code == "MalformedInput"


def test_nested_partial_update(demo):
    reg, model = demo
    ok(reg.process_text("/model", '{"group": {"name": "g2"}}'))
    assert model.group.name == "g2"


# -- process: containers -----------------------------------------------------------


def test_container_read_and_element_access(demo):
    reg, _ = demo
    ok(reg.process_text("/model/group/addVariable", '["x", 5]'))
    ok(reg.process_text("/model/group/addOperation", '["add"]'))
    items = ok(reg.process_text("/model/group/items"))
    assert serialize(items) == '[{"name":"x","value":5},{"op":"add"}]'
    assert ok(reg.process_text("/model/group/items/@elem/0/@type")) == text("Variable")
    assert ok(reg.process_text("/model/group/items/@elem/1/@type")) == text("Operation")
    assert ok(reg.process_text("/model/group/items/@elem/0/value")) == num(5)


def test_container_element_write_through(demo):
    reg, model = demo
    ok(reg.process_text("/model/group/addVariable", '["x", 5]'))
    ok(reg.process_text("/model/group/items/@elem/0/value", "7"))
    assert model.group.items[0].value == 7.0
    ok(reg.process_text("/model/group/items/@elem/0", '{"name": "y"}'))
    assert model.group.items[0].name == "y"


def test_container_bounds_and_index_errors(demo):
    reg, _ = demo
    assert reg.process_text("/model/group/items/@elem/0").code == "BadIndex"
    ok(reg.process_text("/model/group/addVariable", '["x", 1]'))
    assert reg.process_text("/model/group/items/@elem/1/value").code == "BadIndex"
    assert reg.process_text("/model/group/items/@elem/zero").code == "BadIndex"


def test_container_update_must_preserve_size(demo):
    reg, _ = demo
    ok(reg.process_text("/model/group/addVariable", '["x", 1]'))
    resp = reg.process_text("/model/group/items", "[]")
    assert resp.code == "MalformedInput"


def test_elem_on_non_container_is_not_found(demo):
    reg, _ = demo
    assert reg.process_text("/model/@elem/0").code == "NotFound"


# -- introspection ------------------------------------------------------------------


def test_list_of_model_matches_registration_table(demo):
    reg, _ = demo
    names = [e.as_string() for e in ok(reg.list("/model")).as_array()]
    assert names == sorted(MODEL_CHILDREN)
    group_names = [e.as_string() for e in ok(reg.list("/model/group")).as_array()]
    assert group_names == sorted(GROUP_CHILDREN)


def test_list_leaf_and_missing(demo):
    reg, _ = demo
    assert ok(reg.list("/model/t")) == Value.array()
    assert ok(reg.list("/model/step")) == Value.array()  # callables have no subcommands
    assert reg.list("/nonexistent").code == "NotFound"


def test_list_of_container_contributes_elem(demo):
    reg, _ = demo
    assert ok(reg.list("/model/group/items")) == Value.array([text("@elem")])


def test_every_listed_name_resolves(demo):
    reg, _ = demo
    ok(reg.process_text("/model/group/addVariable", '["x", 1]'))

    def walk(prefix, depth=0):
        if depth > 4:
            return
        for entry in ok(reg.list(prefix)).as_array():
            child = entry.as_string()
            sub = f"{prefix}/{child}" if child != "@elem" else f"{prefix}/@elem/0"
            resp = reg.process_text(sub)
            assert resp.code != "NotFound", f"{sub} did not resolve"
            walk(sub, depth + 1)

    walk("/model")


def test_type_of_reports_static_and_dynamic_types(demo):
    reg, _ = demo
    assert ok(reg.type_of("/model")) == text("Model")
    assert ok(reg.type_of("/model/t")) == text("double")
    assert ok(reg.type_of("/model/group")) == text("Group")
    assert ok(reg.type_of("/model/group/name")) == text("string")
    assert ok(reg.type_of("/model/group/items")) == text("sequence<Item>")
    assert reg.type_of("/nope").code == "NotFound"


def test_signature_of_attribute_reports_implied_pair(demo):
    reg, _ = demo
    sig = ok(reg.signature_of("/model/t"))
    assert serialize(sig) == '[{"ret":"double","args":[]},{"ret":"double","args":["double"]}]'


def test_signature_of_methods(demo):
    reg, _ = demo
    assert (
        serialize(ok(reg.signature_of("/model/exportEquations")))
        == '[{"ret":"void","args":["string","bool"]}]'
    )
    step = ok(reg.signature_of("/model/step")).as_array()
    assert sorted(len(s.as_object()["args"].as_array()) for s in step) == [0, 1]


def test_signature_of_plain_node_is_no_match(demo):
    reg, _ = demo
    assert reg.signature_of("/model/group").code == "NoMatch"


def test_meta_ops_do_not_mutate_state(demo):
    reg, _ = demo
    ok(reg.process_text("/model/group/addVariable", '["x", 1]'))
    snapshot = ok(reg.process_text("/model"))
    reg.list("/model")
    reg.type_of("/model/group/items/@elem/0")
    reg.signature_of("/model/step")
    reg.process_text("/model/@list")
    reg.process_text("/model/@type")
    reg.process_text("/model/step/@signature")
    assert ok(reg.process_text("/model")) == snapshot


def test_meta_must_be_terminal(demo):
    reg, _ = demo
    assert reg.process_text("/model/@list/t").code == "NotFound"


def test_identical_requests_give_identical_responses(demo):
    reg, _ = demo
    r1 = reg.process_text("/model/@list")
    r2 = reg.process_text("/model/@list")
    assert r1 == r2


# -- registration ----------------------------------------------------------------


def test_register_node_and_duplicate(demo):
    reg, _ = demo
    extra = TypeDescriptor("Extra", attributes={"k": FLOAT_LIKE})
    box = {"k": 1.0}

    class Holder:
        k = 2.5

    holder = Holder()
    reg.register_node(
        "/model", "extra", extra, {"k": attribute_of(holder, "k", FLOAT_LIKE)}
    )
    assert ok(reg.type_of("/model/extra")) == text("Extra")
    assert ok(reg.process_text("/model/extra/k")) == num(2.5)
    assert len(ok(reg.list("/model/extra")).as_array()) == 1
    with pytest.raises(DuplicateNameError):
        reg.register_node("/model", "extra", extra, {})


def test_register_node_needs_existing_parent(demo):
    reg, _ = demo
    with pytest.raises(NotFoundError):
        reg.register_node("/nowhere", "x", TypeDescriptor("X"), {})


def test_register_node_at_root_records_instance(demo):
    reg, _ = demo
    assert reg.root_instances() == {"model": "Model"}


def test_error_codes_stay_in_the_closed_set():
    assert Response.failure("NotACode", "msg").code == "Internal"
    assert Response.failure("BadIndex", "msg").code == "BadIndex"


def test_error_payload_shape(demo):
    reg, _ = demo
    v = reg.process_text("/nope").to_value()
    assert serialize(v) == '{"error":"NotFound","message":"no such endpoint: \'nope\'"}'
