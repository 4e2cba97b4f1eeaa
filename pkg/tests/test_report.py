from classes.certifier_class import certify_all
from classes.dini_class import check_SR, check_WR, set_dini
from classes.report_class import certify_payload, derive_payload, instance_hash, render, render_kv


def test_kv_flattens_nested_payloads():
    text = render_kv({"a": [1, {"b": True}], "c": "x"})
    assert text.splitlines() == ["a.count=2", "a.0=1", "a.1.b=true", "c=x"]


def test_instance_hash_tracks_the_content(r2, pareto):
    assert instance_hash(r2) == instance_hash(r2)
    assert instance_hash(r2) != instance_hash(pareto)
    assert len(instance_hash(r2)) == 64


def test_certify_payload_renders_both_ways(r2):
    payload = certify_payload(r2, certify_all(r2.f, r2.x0, r2.testset))
    verdicts = {v["condition"]: v for v in payload["verdicts"]}
    assert verdicts["Min"]["witness"] == "(0)"
    assert verdicts["mvi_M"]["caveats"] == ["on-testset"]
    assert verdicts["mvi_M"]["strategy"] == "regions"

    kv = render(payload, "kv")
    assert "verdicts.0.condition=Min" in kv
    assert "verdicts.0.verdict=FAILS" in kv
    assert render(payload, "kv") == kv

    human = render(payload)
    assert human.startswith("instance r2-minty-gap")
    assert "note: mvi_M fails exactly on [2/5, 2/3)" in human


def test_derive_payload_lists_rows_and_regularity(r2):
    x, u = (0,), (1,)
    payload = derive_payload(r2, x, u, set_dini(r2.f, x, u), [], check_SR(r2.f, x, u), check_WR(r2.f, x, u))
    assert payload["SR"] is False and payload["WR"] is True
    assert "SR FAIL   WR PASS" in render(payload)


def test_empty_derivative_is_shown_as_empty_set(r2):
    x, u = (0,), (-1,)
    payload = derive_payload(r2, x, u, set_dini(r2.f, x, u), [], check_SR(r2.f, x, u), check_WR(r2.f, x, u))
    assert payload["derivative"] == ["∅"]
    assert "diagnostic" in payload
