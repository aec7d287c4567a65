import pytest
from hypothesis import given
from hypothesis import strategies as st

from aktonc.atoms import GAP, JUNCTIONS, PIN
from aktonc.exceptions import NegativeCount, NonMetricAtom, PlugMismatch
from aktonc.metric import (
    METRIC_ATOMS,
    SideProfile,
    atrim,
    btrim,
    junction,
    metric_atom,
    metric_check,
    metric_in,
    metric_multiple_fork,
    metric_multiple_join,
    metric_multiple_link,
    metric_out,
    plug_offset,
    profile_of,
    sides,
    tilt,
    trim,
)
from aktonc.parser import parse
from aktonc.sorts import SortEngine
from aktonc.terms import Atom, Juxta, Next

P, G = PIN, GAP

_METRIC = st.sampled_from(sorted(METRIC_ATOMS)).map(Atom)
_METRIC_TERMS = st.recursive(
    _METRIC,
    lambda inner: st.one_of(st.builds(Next, inner, inner), st.builds(Juxta, inner, inner)),
    max_leaves=8,
)
_INTERFACES = st.lists(st.sampled_from((P, G)), max_size=10).map(tuple)


def test_every_side_with_a_port_is_a_pin():
    for name, atom in METRIC_ATOMS.items():
        used = set(atom.inputs) | set(atom.outputs)
        assert {side for side in range(4) if atom.profile[side] == P} == used, name


def test_fork_profiles():
    assert sides("F_lr") == SideProfile(P, P, G, P)
    assert sides("F_ls") == SideProfile(P, P, P, G)
    assert sides("F_sr") == SideProfile(P, G, P, P)


def test_rotation_moves_sides_clockwise():
    assert sides("L_l", 1) == SideProfile(G, P, P, G)
    assert sides("L_l", 3) == SideProfile(P, G, G, P)
    assert sides("L_l", 4) == sides("L_l")


def test_non_metric_atoms():
    with pytest.raises(NonMetricAtom):
        metric_atom("Fork")
    with pytest.raises(NonMetricAtom):
        tilt(Atom("And"), "tl")


def test_trims():
    assert atrim((G, P, G)) == (P, G)
    assert btrim((G, P, G)) == (G, P)
    assert trim((G, G, P, P, G)) == (P, P)
    assert trim((G,)) == ()


def test_metric_interfaces_keep_gaps():
    assert metric_in(Atom("Up")) == (G,)
    assert metric_out(parse("L_s/CS/Down")) == (P, G, G)
    assert metric_in(parse("tl(J_ls)")) == (P, P)


def test_plug_offsets_align_first_pins():
    assert plug_offset((G, P), (P,)) == 1
    assert plug_offset((P,), (G, G, P)) == -2
    assert metric_check(Atom("L_s"), Atom("L_s")) == 0
    with pytest.raises(PlugMismatch):
        metric_check(Atom("F_ls"), Atom("L_s"))


def test_tilt_reaches_every_atom():
    assert profile_of(tilt(Atom("L_l"), "tr")) == sides("L_l", 1)
    assert tilt(parse("L_s > L_l"), "tl") == parse("tl(L_s) > tl(L_l)")


@given(_METRIC_TERMS)
def test_tilt_left_undoes_tilt_right(term):
    assert tilt(tilt(term, "tr"), "tl") == term


@given(_METRIC_TERMS)
def test_four_tilts_are_the_identity(term):
    turned = term
    for _ in range(4):
        turned = tilt(turned, "tr")
    assert turned == term


@given(_METRIC_TERMS)
def test_two_left_tilts_equal_two_right_tilts(term):
    assert tilt(tilt(term, "tl"), "tl") == tilt(tilt(term, "tr"), "tr")


@given(_INTERFACES)
def test_trims_are_idempotent(interface):
    trimmed = trim(interface)

    assert trim(trimmed) == trimmed
    assert atrim(atrim(interface)) == atrim(interface)
    assert btrim(btrim(interface)) == btrim(interface)
    assert not trimmed or (trimmed[0] == P and trimmed[-1] == P)


@given(_INTERFACES, _INTERFACES)
def test_plugs_fit_only_when_trims_agree(output, input_):
    if trim(output) != trim(input_):
        with pytest.raises(PlugMismatch):
            plug_offset(output, input_)
    else:
        leading = len(output) - len(atrim(output)) - (len(input_) - len(atrim(input_)))
        assert plug_offset(output, input_) == leading


@given(
    st.lists(st.sampled_from((P, G)), max_size=6).map(lambda middle: (P, *middle, P))
    | st.just((P,)),
    st.integers(0, 4),
    st.integers(0, 4),
    st.integers(0, 4),
    st.integers(0, 4),
)
def test_padded_plugs_are_offset_by_their_leading_gaps(core, above_out, below_out,
                                                       above_in, below_in):
    output = (G,) * above_out + core + (G,) * below_out
    input_ = (G,) * above_in + core + (G,) * below_in

    assert plug_offset(output, input_) == above_out - above_in


def test_multiple_link_kinds():
    assert metric_multiple_link(0, "s") == Atom("L_s")
    assert metric_multiple_link(1, "s") == Juxta(Atom("L_s"), Atom("L_s"))
    assert metric_multiple_link(1, "l") == Juxta(
        Atom("L_l"), parse("L_s > L_l > tl(L_s)")
    )
    with pytest.raises(ValueError):
        metric_multiple_link(0, "x")


@pytest.mark.parametrize("depth", [0, 1, 2])
@pytest.mark.parametrize("kind", ["s", "l", "r"])
def test_multiple_link_is_well_formed(depth, kind):
    report = SortEngine().check(metric_multiple_link(depth, kind))

    assert report.ok
    assert report.inputs == report.outputs == (P,) * (depth + 1)


@pytest.mark.parametrize("build", [metric_multiple_fork, metric_multiple_join])
def test_lr_constructions_do_not_exist(build):
    with pytest.raises(ValueError):
        build(0, "lr")
    with pytest.raises(NegativeCount):
        build(-1, "ls")


@pytest.mark.parametrize("depth", [0, 1, 2])
@pytest.mark.parametrize("kind", ["ls", "sr"])
def test_multiple_fork_lanes(depth, kind):
    engine = SortEngine()
    term = metric_multiple_fork(depth, kind)

    assert engine.in_of(term) == (P,) * (depth + 1)
    assert engine.out_of(term) == (P,) * (2 * (depth + 1))


@pytest.mark.parametrize("depth", [0, 1, 2])
@pytest.mark.parametrize("kind", ["ls", "sr"])
def test_multiple_join_lanes(depth, kind):
    engine = SortEngine()
    term = metric_multiple_join(depth, kind)

    assert engine.in_of(term) == (P,) * (2 * (depth + 1))
    assert engine.out_of(term) == (P,) * (depth + 1)


@pytest.mark.parametrize("name", JUNCTIONS)
def test_junctions_keep_their_bodies(name):
    spec = junction(name)

    assert spec.body is not None
    assert spec.inputs == spec.outputs == (P,)
    with pytest.raises(NonMetricAtom):
        junction("L_s")
