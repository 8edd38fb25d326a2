import pytest

from dualcheck import corpus
from dualcheck.errors import NotFoundError
from dualcheck.probfile import parse_problem


def test_list_contains_the_named_entries():
    names = corpus.list_entries()
    assert "ex-5.1-gowda-teboulle" in names
    assert "ex-6.1-daniele-giuffre" in names
    assert len(names) >= 13
    assert list(names) == sorted(names)


def test_prefix_resolution():
    assert corpus.resolve_id("ex-5.2") == "ex-5.2-norm-over-shifted-cone"
    with pytest.raises(NotFoundError):
        corpus.resolve_id("ex-9.9")
    with pytest.raises(NotFoundError):
        corpus.resolve_id("ex-5")  # ambiguous


def test_every_entry_passes():
    for res in corpus.run_all():
        assert res.passed, (res.entry_id, res.diffs)
        assert res.checked > 0


def test_run_single_entries():
    assert corpus.run("ex-5.2").passed
    assert corpus.run("ex-5.4").passed
    assert corpus.run("ex-5.1").passed


def test_flipped_expectation_produces_named_diff():
    text = (corpus._data_dir() / "ex-5.6-two-dense-subspaces.prob").read_text()
    tampered = text.replace("expect condition RC6 holds", "expect condition RC6 fails")
    pf = parse_problem(tampered)
    res = corpus.run_problem("tampered", pf)
    assert not res.passed
    assert any("RC6" in d for d in res.diffs)


def test_every_symbolic_entry_carries_citations():
    for entry_id in corpus.list_entries():
        text = (corpus._data_dir() / f"{entry_id}.prob").read_text()
        assert "cite" in text, entry_id


def test_entries_parse_as_problem_files():
    # dog-fooding: every corpus entry is a valid CLI input
    for entry_id in corpus.list_entries():
        pf = corpus.load(entry_id)
        assert pf.kind in ("fenchel", "lagrange", "perturbation", "sets")
