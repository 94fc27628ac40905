"""Category kernels: hom enumeration, composition, embedding, generators."""

from math import comb, perm

import pytest
from hypothesis import given, settings, strategies as st

from catrep.category import FiniteGroup, Morphism, make_category, parse_morphism

FI = make_category("fi")
OI = make_category("oi")
FIG = make_category("fi_g", 2)
OIG = make_category("oi_g", 2)
ALL = [FI, OI, FIG, OIG]


def test_hom_counts_closed_forms():
    for cat in ALL:
        gsize = cat.group.order if cat.group else 1
        for r in range(7):
            for s in range(7):
                homs = cat.hom(r, s)
                if r > s:
                    assert homs == ()
                    continue
                base = comb(s, r) if cat.ordered else perm(s, r)
                assert len(homs) == base * gsize ** r == cat.hom_count(r, s)
                assert len(set(homs)) == len(homs)


def test_hom_examples():
    assert [str(m) for m in FI.hom(1, 2)] == ["1->2:[1]", "1->2:[2]"]
    assert len(OI.hom(2, 4)) == 6
    assert FI.hom(3, 1) == ()
    assert len(OIG.hom(1, 2)) == 4


def test_canonical_order_is_lex():
    images = [m.images for m in OI.hom(2, 4)]
    assert images == sorted(images)
    pairs = [(m.images, m.labels) for m in OIG.hom(2, 3)]
    assert pairs == sorted(pairs)


def test_compose_identity_and_example():
    a = parse_morphism("1->2:[2]")
    assert OI.compose(OI.identity(2), a) == a
    assert OI.compose(a, OI.identity(1)) == a
    b = Morphism(2, 3, (1, 3))
    assert OI.compose(b, a) == Morphism(1, 3, (3,))


def test_compose_paper_group_rule():
    # Z/2 decoration: labels multiply as g3(i) = g2(f1(i)) * g1(i)
    alpha = Morphism(1, 1, (1,), (1,))
    beta = Morphism(1, 2, (2,), (1,))
    out = OIG.compose(beta, alpha)
    assert out == Morphism(1, 2, (2,), (0,))


def test_compose_associative_exhaustive_small():
    for cat, lim in [(FI, 3), (OI, 4), (FIG, 2), (OIG, 2)]:
        degs = range(lim + 1)
        for r in degs:
            for s in degs:
                for t in degs:
                    for u in degs:
                        if not (r <= s <= t <= u):
                            continue
                        for a in cat.hom(r, s):
                            for b in cat.hom(s, t):
                                for c in cat.hom(t, u):
                                    assert cat.compose(cat.compose(c, b), a) == cat.compose(
                                        c, cat.compose(b, a)
                                    )


def test_embed_examples():
    a = parse_morphism("1->2:[2]")
    assert OI.embed(a) == Morphism(2, 3, (1, 3))
    assert FI.embed(a) == Morphism(2, 3, (2, 3))
    assert FI.embed(FI.identity(2)) == FI.identity(3)
    assert OI.embed(OI.identity(2)) == OI.identity(3)


def test_embed_functorial_and_faithful():
    for cat, lim in [(FI, 4), (OI, 4), (FIG, 3), (OIG, 3)]:
        for r in range(lim + 1):
            for s in range(r, lim + 1):
                homs = cat.hom(r, s)
                embedded = [cat.embed(a) for a in homs]
                assert len(set(embedded)) == len(embedded)  # faithful
                for t in range(s, lim + 1):
                    for b in cat.hom(s, t):
                        for a in homs:
                            assert cat.embed(cat.compose(b, a)) == cat.compose(
                                cat.embed(b), cat.embed(a)
                            )


def test_mu_witness_values():
    assert OI.mu_witness(1) == Morphism(1, 2, (2,))
    assert FI.mu_witness(1) == Morphism(1, 2, (1,))
    assert OIG.mu_witness(2).labels == (0, 0)
    assert FIG.mu_witness(2).labels == (0, 0)


def test_mu_naturality_exhaustive():
    for cat, lim in [(FI, 4), (OI, 4), (FIG, 3), (OIG, 3)]:
        for r in range(lim + 1):
            for s in range(r, lim + 1):
                for a in cat.hom(r, s):
                    lhs = cat.compose(cat.embed(a), cat.mu_witness(r))
                    rhs = cat.compose(cat.mu_witness(s), a)
                    assert lhs == rhs


def test_factor_through_predecessor():
    a = Morphism(1, 3, (3,))
    b, g = OI.factor_through_predecessor(a)
    assert OI.compose(g, b) == a
    empty = Morphism(0, 2, ())
    b, g = FI.factor_through_predecessor(empty)
    assert FI.compose(g, b) == empty
    with pytest.raises(ValueError):
        OI.factor_through_predecessor(Morphism(1, 2, (1,)))
    for cat, lim in [(FI, 4), (OI, 5), (FIG, 3), (OIG, 3)]:
        for r in range(lim):
            for s in range(r + 2, lim + 1):
                for a in cat.hom(r, s):
                    b, g = cat.factor_through_predecessor(a)
                    assert cat.compose(g, b) == a
                    if cat.group:
                        assert g.labels == (0,) * g.src  # labels ride on beta


def _end_closure_size(cat, s):
    seen = {cat.identity(s)}
    frontier = list(seen)
    while frontier:
        x = frontier.pop()
        for g in cat.end_generators(s):
            y = cat.compose(g, x)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return len(seen)


def test_end_generators_generate():
    assert OI.end_generators(3) == ()
    assert len(FI.end_generators(3)) == 2  # adjacent transpositions
    assert _end_closure_size(FI, 3) == 6
    assert _end_closure_size(FIG, 2) == 8  # spec example: one swap + one label flip
    for cat in ALL:
        for s in range(5 if not cat.group else 4):
            assert _end_closure_size(cat, s) == cat.hom_count(s, s)


def test_morphism_encoding_round_trip():
    for cat, lim in [(FI, 3), (OIG, 2)]:
        for r in range(lim + 1):
            for s in range(r, lim + 1):
                for m in cat.hom(r, s):
                    assert parse_morphism(m.encode()) == m
    with pytest.raises(ValueError):
        parse_morphism("nonsense")


def test_validate_rejects_bad_morphisms():
    with pytest.raises(ValueError):
        OI.validate(Morphism(2, 3, (2, 1)))  # not increasing
    with pytest.raises(ValueError):
        FI.validate(Morphism(2, 3, (1, 1)))  # not injective
    with pytest.raises(ValueError):
        FI.validate(Morphism(2, 1, (1, 1)))  # violates directedness
    with pytest.raises(ValueError):
        OIG.validate(Morphism(1, 2, (1,)))  # missing labels
    with pytest.raises(ValueError):
        OI.validate(Morphism(1, 2, (1,), (0,)))  # unexpected labels


def test_finite_group_cyclic_and_table():
    g = FiniteGroup.cyclic(4)
    assert g.order == 4 and g.generators == (1,)
    for a in range(4):
        w = g.word(a)
        acc = 0
        for gi in w:
            acc = g.mul(acc, g.generators[gi])
        assert acc == a
    # Klein four group needs two generators
    k4 = FiniteGroup.from_table([[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]])
    assert len(k4.generators) >= 2
    with pytest.raises(ValueError):
        FiniteGroup.from_table([[0, 1], [1, 1]])


def test_make_category_validation():
    with pytest.raises(ValueError):
        make_category("fi_g")
    with pytest.raises(ValueError):
        make_category("fi", 2)
    with pytest.raises(ValueError):
        make_category("xx")
    cat = make_category("oi_g", "table:2:0,1,1,0")
    assert cat.group.order == 2


@st.composite
def composable_pair(draw):
    cat = draw(st.sampled_from(ALL))
    r = draw(st.integers(0, 3))
    s = draw(st.integers(r, 4))
    t = draw(st.integers(s, 5))
    homs_a, homs_b = cat.hom(r, s), cat.hom(s, t)
    if not homs_a or not homs_b:
        return None
    a = draw(st.sampled_from(homs_a))
    b = draw(st.sampled_from(homs_b))
    return cat, a, b


@settings(max_examples=80, deadline=None)
@given(composable_pair())
def test_compose_stays_valid(pair):
    if pair is None:
        return
    cat, a, b = pair
    out = cat.compose(b, a)
    cat.validate(out)
    assert out.src == a.src and out.dst == b.dst
