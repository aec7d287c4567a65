import pytest
from hypothesis import given
from hypothesis import strategies as st

from aktonc.atoms import PIN, builtin_registry
from aktonc.exceptions import (
    DuplicateAtom,
    IllFormedBody,
    InvalidCount,
    NegativeCount,
    NoMatch,
    NotANextTerm,
    ParseError,
    UnknownAtom,
)
from aktonc.parser import check_syntax, load_file, load_program, parse
from aktonc.sorts import SortEngine
from aktonc.terms import (
    Atom,
    Juxta,
    Next,
    Tilt,
    complement,
    leaves,
    next_chain,
    parse_path,
    power,
    pre,
    replace,
    subterm,
    suc,
    tilted,
    times,
    to_json,
    to_text,
)
from aktonc.tests.conftest import DIAMOND, corpus_file

ENTRY, EXIT, LINK, FORK, JOIN = (Atom(name) for name in ("Entry", "Exit", "Link", "Fork", "Join"))

_NAMES = sorted(builtin_registry())


def _terms():
    atoms = st.sampled_from(_NAMES).map(Atom)
    return st.recursive(
        atoms,
        lambda inner: st.one_of(
            st.builds(Next, inner, inner),
            st.builds(Juxta, inner, inner),
            st.builds(tilted, inner, st.integers(min_value=1, max_value=3)),
        ),
        max_leaves=12,
    )


def test_next_binds_looser_than_juxta():
    assert parse(DIAMOND) == next_chain(ENTRY, FORK, Juxta(LINK, LINK), JOIN, EXIT)


def test_operators_nest_to_the_left():
    assert parse("Link / Link / Link") == Juxta(Juxta(LINK, LINK), LINK)
    assert parse("Link > (Link > Link)") == Next(LINK, Next(LINK, LINK))


def test_counting_operators_desugar():
    assert parse("3*Link") == Next(LINK, Next(LINK, LINK))
    assert parse("Link^2") == Juxta(LINK, LINK)
    assert parse("Entry > 0*Link > Exit") == Next(ENTRY, EXIT)


def test_zero_count_program_is_rejected():
    with pytest.raises(InvalidCount):
        parse("0*Link")


def test_negative_count_is_rejected():
    with pytest.raises(NegativeCount):
        parse("-1*Link")


def test_tilts_merge_and_cancel():
    assert parse("tl(tr(Link))") == LINK
    assert parse("tr(tr(Link))") == Tilt(2, LINK)
    assert parse("tl(Link)") == Tilt(3, LINK)


def test_labels_and_comments():
    source = "# two named ports\nEntry.A > Exit.out"
    assert parse(source) == Next(Atom("Entry", "A"), Atom("Exit", "out"))


def test_unknown_atom_reports_position():
    with pytest.raises(UnknownAtom) as excinfo:
        parse("Entry > Foo")
    assert excinfo.value.details == {"name": "Foo", "line": 1, "column": 9}


def test_syntax_error_is_a_parse_error():
    with pytest.raises(ParseError) as excinfo:
        parse("Entry > ")
    assert excinfo.value.code == "syntax_error"
    assert excinfo.value.details["line"] == 1


def test_check_syntax_does_not_resolve_atoms():
    check_syntax("Foo > Bar")
    with pytest.raises(ParseError):
        check_syntax("Foo >")


def test_definitions_are_concealed_in_order():
    loaded = load_file(corpus_file("concealed_fork"))
    spec = loaded.registry["F2"]

    assert [name for name, _body in loaded.definitions] == ["F2"]
    assert spec.sort == "B"
    assert spec.inputs == (PIN,)
    assert spec.outputs == (PIN, PIN, PIN)
    assert not spec.builtin
    assert loaded.term == next_chain(ENTRY, Atom("F2"), Juxta(JOIN, LINK), JOIN, EXIT)


def test_ill_formed_definition_is_rejected():
    with pytest.raises(IllFormedBody):
        load_program("Bad := Entry > Join ; Bad")


def test_builtin_names_cannot_be_redefined():
    with pytest.raises(DuplicateAtom):
        load_program("Link := Fork > Join ; Link")


def test_registry_expands_concealed_atoms():
    loaded = load_program("F2 := Fork > Join ; Entry > F2 > Exit")
    assert loaded.registry.expand(loaded.term) == next_chain(ENTRY, Next(FORK, JOIN), EXIT)


def test_paths_address_subterms():
    term = parse(DIAMOND)

    assert subterm(term, parse_path("0.0.0.1")) == FORK
    assert subterm(replace(term, (0, 0, 0, 1), LINK), (0, 0, 0, 1)) == LINK
    assert parse_path("") == ()
    with pytest.raises(NoMatch):
        subterm(term, (1, 0))
    with pytest.raises(NoMatch):
        parse_path("a.b")


def test_leaves_run_top_to_bottom_left_to_right():
    names = [atom.name for _path, atom in leaves(parse(DIAMOND))]
    assert names == ["Entry", "Fork", "Link", "Link", "Join", "Exit"]


def test_complement_swaps_cut_atoms():
    assert complement(parse("Up/Set > Link")) == parse("Down/Off > Link")


NUCLEOTIDES = {
    "A": ("(Link/Up) > (Link/Off)", "BUBO"),
    "T": ("(Link/Down) > (Link/Set)", "BDBS"),
    "G": ("(Link/Down) > (Link/Off)", "BDBO"),
    "C": ("(Link/Up) > (Link/Set)", "BUBS"),
}


@pytest.mark.parametrize(("base", "partner"), [("A", "T"), ("T", "A"), ("G", "C"), ("C", "G")])
def test_complement_pairs_nucleotides(base, partner):
    source, sort = NUCLEOTIDES[base]
    term = parse(source)

    assert SortEngine().sort_of(term) == sort
    assert complement(term) == parse(NUCLEOTIDES[partner][0])
    assert complement(complement(term)) == term


@pytest.mark.parametrize(
    ("name", "partner"),
    [
        ("dna_adenine", "dna_thymine"),
        ("dna_thymine", "dna_adenine"),
        ("dna_guanine", "dna_cytosine"),
        ("dna_cytosine", "dna_guanine"),
    ],
)
def test_complement_maps_base_pairs_onto_each_other(name, partner):
    term = load_file(corpus_file(name)).term

    assert complement(term) == load_file(corpus_file(partner)).term
    assert complement(complement(term)) == term
    assert SortEngine().check(complement(term)).ok


def test_pre_and_suc():
    assert pre(Next(FORK, JOIN)) == FORK
    assert suc(Next(FORK, JOIN)) == JOIN
    with pytest.raises(NotANextTerm):
        pre(LINK)


def test_counts_vanish_at_zero():
    assert times(0, LINK) is None
    assert power(LINK, 0) is None
    with pytest.raises(NegativeCount):
        times(-1, LINK)


def test_printer_uses_minimal_parentheses():
    assert to_text(parse(DIAMOND)) == "Entry>Fork>Link/Link>Join>Exit"
    assert to_text(Juxta(Next(LINK, LINK), LINK)) == "(Link>Link)/Link"
    assert to_text(Juxta(LINK, Juxta(LINK, LINK))) == "Link/(Link/Link)"
    assert to_text(Next(LINK, Next(LINK, LINK))) == "Link>(Link>Link)"
    assert to_text(Tilt(2, LINK)) == "tr(tr(Link))"


def test_json_form():
    assert to_json(Next(Atom("Entry", "A"), Tilt(3, EXIT))) == {
        "next": [{"atom": "Entry", "label": "A"}, {"tilt": 3, "body": {"atom": "Exit"}}]
    }


@given(_terms())
def test_printed_terms_parse_back(term):
    assert parse(to_text(term)) == term
