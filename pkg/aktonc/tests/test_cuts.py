import pytest

from aktonc.atoms import PIN, AtomRegistry, AtomSpec, builtin_registry
from aktonc.cuts import CROSSING, CYCLE, TWIN_CUT, bind_cuts, cut_letters
from aktonc.exceptions import OpaqueCut, UnmatchedCut
from aktonc.parser import load_file, parse
from aktonc.rewrite import multiple_fork
from aktonc.sorts import SortEngine
from aktonc.terms import Atom, Juxta
from aktonc.tests.conftest import corpus_file


def test_cut_letters_know_their_side_of_the_body():
    assert cut_letters("CS") == []
    assert cut_letters("U") == [("U", "n")]
    assert cut_letters("DB") == [("D", "a")]
    assert cut_letters("SBDB") == [("S", "a"), ("D", "b")]


def test_up_down_next_is_a_crossing():
    bindings = bind_cuts(parse("Up > Down"))
    (pair,) = bindings.pairs

    assert pair.family == CROSSING
    assert pair.kind == "cut-spatial"
    assert (pair.tail.atom, pair.head.atom) == ("Down", "Up")
    assert pair.tail.path == (1,)


def test_set_off_next_is_a_cycle():
    (pair,) = bind_cuts(parse("Set > Off")).pairs

    assert pair.family == CYCLE
    assert pair.kind == "cut-planar"
    assert (pair.tail.atom, pair.head.atom) == ("Off", "Set")


def test_tetrahedron_has_one_crossing_and_one_cycle():
    bindings = bind_cuts(load_file(corpus_file("tetrahedron")).term)

    assert bindings.families() == {CROSSING: 1, CYCLE: 1}
    assert sorted(pair.kind for pair in bindings) == ["cut-planar", "cut-spatial"]


@pytest.mark.parametrize(
    "name", ["dna_adenine", "dna_thymine", "dna_guanine", "dna_cytosine", "sr_latch"]
)
def test_strand_crossings_bind_as_left_twisted_twin_cuts(name):
    bindings = bind_cuts(load_file(corpus_file(name)).term)

    assert bindings.families() == {TWIN_CUT: 2}
    assert {pair.twist for pair in bindings} == {"left"}
    assert sorted((pair.tail.atom, pair.head.atom) for pair in bindings) == [
        ("Down", "Up"),
        ("Off", "Set"),
    ]


def test_lone_strand_end_is_unmatched():
    with pytest.raises(UnmatchedCut):
        bind_cuts(parse("(Link/Up) > (Link/Off)"))


def test_unmatched_cut_is_a_check_violation():
    report = SortEngine().check(Atom("Up"))

    assert report.sort == "U"
    assert [v.code for v in report.violations] == ["unmatched_cut"]


def test_labels_pair_cut_atoms_directly():
    (pair,) = bind_cuts(parse("Up.k > Down.k")).pairs

    assert pair.family == CROSSING
    assert (pair.tail.label, pair.head.label) == ("k", "k")


def test_multiple_fork_pairs_each_crossing():
    bindings = bind_cuts(multiple_fork(2))

    assert bindings.families() == {CROSSING: 2}


def test_concealed_cut_carriers_are_opaque():
    half = AtomSpec(
        "Half", "BU", (PIN,), (PIN, PIN), body=Juxta(Atom("Link"), Atom("Up")), builtin=False
    )
    registry = AtomRegistry({**builtin_registry().entries, "Half": half})

    with pytest.raises(OpaqueCut):
        bind_cuts(Atom("Half"), SortEngine(registry))


def test_bindings_serialize():
    payload = bind_cuts(parse("Set > Off")).as_dict()

    assert payload == {
        "pairs": [{"tail": "Off@1", "head": "Set@0", "family": "cycle", "twist": "n/a"}],
        "families": {"cycle": 1},
    }
