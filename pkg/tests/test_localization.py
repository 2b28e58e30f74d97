"""Tests for the localization layer: ideal quotients, the inverted class,
multiplicative-system checks, roofs, localized extension groups and the
top-level verdicts."""

import random
from functools import lru_cache

import pytest

from exangulate.exangulated import ExCategory
from exangulate.localization import (
    FractionHoms,
    IdealQuotient,
    LocalizationError,
    MorphismClassSpec,
    TableComplex,
    check_mr,
    ebar_group,
    ebar_pull,
    ebar_push,
    etilde_group,
    fbar_membership,
    ideal_project,
    identity_roof,
    k_subgroup,
    localize,
    make_roof,
    member_classes,
    ore_left,
    ore_right,
    roof_add,
    roof_equal,
    roof_pull,
    roof_push,
    roof_zero,
    s_tilde,
    weak_kc_check,
)
from exangulate.quiver import (
    AlgebraPresentation,
    Arrow,
    Quiver,
    Relation,
    direct_sum,
    hom_basis,
    identity_morphism,
    interval_module,
    zero_morphism,
)

A4 = Quiver(4, (Arrow("a", 1, 2), Arrow("b", 2, 3), Arrow("c", 3, 4)))
ALG = AlgebraPresentation(A4, (Relation((1,), (("a", "b", "c"),)),), p=2,
                          path_length_bound=8)
LABELS = ["4", "3/4", "2/3/4", "1/2/3", "1/2", "1"]
SPANS = {"4": (4, 4), "3/4": (3, 4), "2/3/4": (2, 4), "1/2/3": (1, 3),
         "1/2": (1, 2), "1": (1, 1)}
GENS = [interval_module(ALG, *SPANS[lab]) for lab in LABELS]
CAT = ExCategory(ALG, 2, GENS, labels=LABELS, multiplicity_bound=2)

ISO = MorphismClassSpec("iso")


def gen(label):
    return GENS[LABELS.index(label)]


def the_map(src_label, tgt_label):
    basis = hom_basis(gen(src_label), gen(tgt_label))
    assert len(basis) == 1
    return basis[0]


@lru_cache(maxsize=None)
def cluster_quotient():
    return IdealQuotient(CAT, [2])


@lru_cache(maxsize=None)
def trivial_quotient():
    return IdealQuotient(CAT, [])


@lru_cache(maxsize=None)
def cluster_report():
    return localize(CAT, ISO, [2])


@lru_cache(maxsize=None)
def trivial_report():
    return localize(CAT, ISO, [])


# -- the ideal quotient -------------------------------------------------------


def test_quotient_dims_cluster():
    """Killing add(2/3/4) wipes out every hom through it."""
    q = cluster_quotient()
    table = [[q.qdim(gs, gt) for gt in GENS] for gs in GENS]
    assert table == [
        [1, 1, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 1, 1, 1],
        [0, 0, 0, 0, 1, 1],
        [0, 0, 0, 0, 0, 1],
    ]


def test_quotient_with_empty_nf_changes_nothing():
    q = trivial_quotient()
    for gs in GENS:
        for gt in GENS:
            assert q.qdim(gs, gt) == len(hom_basis(gs, gt))


def test_ideal_project_kills_factoring_morphisms():
    q = cluster_quotient()
    through = the_map("3/4", "2/3/4")
    onward = the_map("2/3/4", "1/2/3")
    composite = onward.compose(through)
    assert composite.is_zero is False
    assert ideal_project(q, composite) == (0,) or not any(
        ideal_project(q, composite))
    assert any(ideal_project(q, identity_morphism(gen("4"))))


def test_rep_project_roundtrip():
    q = cluster_quotient()
    for a, b in [("4", "4"), ("4", "3/4"), ("1/2/3", "1")]:
        X, Y = gen(a), gen(b)
        for cls in q.classes(X, Y):
            assert q.project(q.rep(X, Y, cls)) == cls


def test_compose_classes_agrees_with_projection():
    q = trivial_quotient()
    rng = random.Random(7)
    pairs = [("4", "3/4", "2/3/4"), ("1/2/3", "1/2", "1"),
             ("3/4", "2/3/4", "1/2/3")]
    for a, b, c in pairs:
        X, Y, Z = gen(a), gen(b), gen(c)
        for _ in range(10):
            fc = tuple(rng.randrange(2) for _ in range(q.qdim(X, Y)))
            gc = tuple(rng.randrange(2) for _ in range(q.qdim(Y, Z)))
            composed = q.compose_classes(X, Y, Z, fc, gc)
            direct = q.project(q.rep(Y, Z, gc).compose(q.rep(X, Y, fc)))
            assert composed == direct


def test_nf_index_validation():
    with pytest.raises(ValueError):
        IdealQuotient(CAT, [9])


def test_nf_labels():
    assert cluster_quotient().nf_labels == ("2/3/4",)


# -- the inverted class -------------------------------------------------------


def test_iso_mode_members_cluster():
    q = cluster_quotient()
    assert sorted(member_classes(ISO, q, gen("4"), gen("4"))) == [(1,)]
    assert sorted(member_classes(ISO, q, gen("4"), gen("3/4"))) == []
    assert sorted(member_classes(ISO, q, gen("1/2/3"), gen("1/2"))) == []
    # a dead object is isomorphic to itself via the zero class
    assert sorted(member_classes(ISO, q, gen("2/3/4"), gen("2/3/4"))) == [()]


def test_fbar_membership_cluster():
    q = cluster_quotient()
    assert fbar_membership(ISO, q, identity_morphism(gen("1")))
    assert not fbar_membership(ISO, q, the_map("4", "3/4"))
    assert fbar_membership(ISO, q, zero_morphism(gen("2/3/4"), gen("2/3/4")))
    # padding with a dead summand keeps a map invertible in the quotient
    _, incls, _ = direct_sum([gen("4"), gen("2/3/4")])
    assert fbar_membership(ISO, q, incls[0])


def test_spec_validation():
    with pytest.raises(ValueError):
        MorphismClassSpec("homotopy")
    with pytest.raises(ValueError):
        MorphismClassSpec("iso", (identity_morphism(gen("1")),))


def test_saturate_closure_contents():
    """The seeded closure adds iso-conjugates and direct sums, but does not
    invent composites with non-members."""
    q = trivial_quotient()
    f = the_map("4", "3/4")
    spec = MorphismClassSpec("saturate", (f,))
    assert q.project(f) in member_classes(spec, q, gen("4"), gen("3/4"))
    h = the_map("3/4", "2/3/4").compose(f)
    assert q.project(h) not in member_classes(spec, q, gen("4"), gen("2/3/4"))
    # f + identity of 1 lives in the closure at the summed ends
    src = CAT.materialize((0, 5))
    tgt = CAT.materialize((1, 5))
    assert len(member_classes(spec, q, src, tgt)) > 0


# -- Ore completions ----------------------------------------------------------


def test_ore_right_postcondition():
    q = cluster_quotient()
    _, incls, _ = direct_sum([gen("4"), gen("2/3/4")])
    s = incls[0]                      # member: 4 -> 4 + 2/3/4
    f = the_map("4", "3/4")
    w, s2, f2 = ore_right(ISO, q, s, f)
    assert fbar_membership(ISO, q, s2)
    assert q.project(s2.compose(f)) == q.project(f2.compose(s))


def test_ore_left_postcondition():
    q = cluster_quotient()
    _, _, projs = direct_sum([gen("1"), gen("2/3/4")])
    s = projs[0]                      # member: 1 + 2/3/4 -> 1
    f = the_map("1/2", "1")
    w, s2, f2 = ore_left(ISO, q, s, f)
    assert fbar_membership(ISO, q, s2)
    assert q.project(f.compose(s2)) == q.project(s.compose(f2))


def test_ore_failure_raises():
    """No completion exists for the span 2/3/4 <- 4 -> 3/4 when only the
    two seeds are inverted."""
    q = trivial_quotient()
    f = the_map("4", "3/4")
    h = the_map("3/4", "2/3/4").compose(f)
    spec = MorphismClassSpec("saturate", (f, h))
    with pytest.raises(LocalizationError):
        ore_right(spec, q, h, f)


# -- multiplicative system checks ----------------------------------------------


def test_mr_checks_pass_on_cluster():
    res = check_mr(ISO, cluster_quotient())
    assert [(k, v.passed, v.checked) for k, v in res.items()] == [
        ("M0", True, 378),
        ("MR1", True, 10268),
        ("MR2", True, 10268),
        ("MR3", True, 39),
    ]


def test_mr1_catches_missing_cancellation():
    """Seeding f and g.f without g leaves a class whose cancellation
    partner is missing."""
    q = trivial_quotient()
    f = the_map("4", "3/4")
    h = the_map("3/4", "2/3/4").compose(f)
    res = check_mr(MorphismClassSpec("saturate", (f, h)), q)
    assert not res["MR1"].passed
    assert res["MR1"].witness == (
        "4 -> 3/4 -> 2/3/4: the first factor and the composite are in F-bar "
        "but the second factor is not")


# -- K and E-bar ---------------------------------------------------------------


def test_k_vanishes_on_cluster():
    q = cluster_quotient()
    for c_label, a_label in [("1", "4"), ("1", "3/4"), ("1/2", "4")]:
        assert k_subgroup(ISO, q, gen(c_label), gen(a_label)) == []
        assert ebar_group(ISO, q, gen(c_label), gen(a_label)).dim == 1


def test_ebar_matches_ext_on_trivial():
    q = trivial_quotient()
    for C in GENS:
        for A in GENS:
            assert ebar_group(ISO, q, C, A).dim == CAT.ext(C, A).dim


def test_ebar_lift_project_roundtrip():
    q = cluster_quotient()
    eb = ebar_group(ISO, q, gen("1"), gen("4"))
    for coords in eb.classes():
        assert eb.project(eb.lift(coords)) == coords


def test_descended_push_and_pull():
    q = cluster_quotient()
    eb = ebar_group(ISO, q, gen("1"), gen("4"))
    assert ebar_pull(ISO, q, eb, (1,), the_map("1/2", "1")) == (1,)
    assert ebar_push(ISO, q, eb, (1,), the_map("4", "3/4")) == (1,)
    assert ebar_push(ISO, q, eb, (0,), the_map("4", "3/4")) == (0,)


# -- roofs ---------------------------------------------------------------------


def test_make_roof_rejects_non_members():
    q = cluster_quotient()
    with pytest.raises(ValueError):
        make_roof(ISO, q, the_map("1/2", "1"), (1,),
                  identity_morphism(gen("4")))


def test_make_roof_rejects_wrong_coords():
    q = cluster_quotient()
    with pytest.raises(ValueError):
        make_roof(ISO, q, identity_morphism(gen("1")), (1, 0),
                  identity_morphism(gen("4")))


def test_roof_with_padded_denominators_equals_identity_roof():
    """[t \\ delta / s] with t, s the canonical projection/inclusion around
    dead summands is the identity roof of the matching class."""
    q = cluster_quotient()
    _, _, zprojs = direct_sum([gen("2/3/4"), gen("1")])
    _, xincls, _ = direct_sum([gen("4"), gen("2/3/4")])
    r = make_roof(ISO, q, zprojs[1], (1,), xincls[0])
    rid = identity_roof(ISO, q, gen("1"), gen("4"), (1,))
    assert roof_equal(ISO, q, r, rid)
    assert not roof_equal(ISO, q, r, roof_zero(ISO, q, gen("1"), gen("4")))
    total = roof_add(ISO, q, r, rid)
    assert roof_equal(ISO, q, total, roof_zero(ISO, q, gen("1"), gen("4")))


def test_roof_equal_needs_matching_ends():
    q = cluster_quotient()
    with pytest.raises(ValueError):
        roof_equal(ISO, q, identity_roof(ISO, q, gen("1"), gen("4"), (1,)),
                   identity_roof(ISO, q, gen("1"), gen("3/4"), (1,)))


def test_roof_push_and_pull_match_descended_maps():
    q = cluster_quotient()
    eb = ebar_group(ISO, q, gen("1"), gen("4"))
    r = identity_roof(ISO, q, gen("1"), gen("4"), (1,))
    pushed = roof_push(ISO, q, r, the_map("4", "3/4"))
    expect = identity_roof(ISO, q, gen("1"), gen("3/4"),
                           ebar_push(ISO, q, eb, (1,), the_map("4", "3/4")))
    assert roof_equal(ISO, q, pushed, expect)
    pulled = roof_pull(ISO, q, r, the_map("1/2", "1"))
    expect = identity_roof(ISO, q, gen("1/2"), gen("4"),
                           ebar_pull(ISO, q, eb, (1,), the_map("1/2", "1")))
    assert roof_equal(ISO, q, pulled, expect)


def test_etilde_group_cluster():
    et = etilde_group(ISO, cluster_quotient(), gen("1"), gen("4"))
    assert len(et.reps) == 2
    assert et.mu_map == (0, 1)
    assert et.zero_index == 0
    assert et.add_table == ((0, 1), (1, 0))


# -- realization of roofs --------------------------------------------------------


def test_s_tilde_of_identity_roof_is_the_realization():
    q = cluster_quotient()
    r = identity_roof(ISO, q, gen("1"), gen("4"), (1,))
    cx = s_tilde(CAT, ISO, q, r)
    nex = CAT.realize(CAT.ext(gen("1"), gen("4")).element([1]))
    assert cx.terms == nex.terms
    assert cx.diffs == nex.diffs


def test_s_tilde_absorbs_denominators():
    q = cluster_quotient()
    _, _, zprojs = direct_sum([gen("2/3/4"), gen("1")])
    _, xincls, _ = direct_sum([gen("4"), gen("2/3/4")])
    r = make_roof(ISO, q, zprojs[1], (1,), xincls[0])
    cx = s_tilde(CAT, ISO, q, r)
    assert cx.terms[0] == gen("4")
    assert cx.terms[-1] == gen("1")
    labels = [CAT.format_object(t) for t in cx.terms]
    assert labels == ["4", "2/3/4 + 2/3/4", "2/3/4 + 1/2/3", "1"]


def test_table_complex_validation():
    nex = CAT.realize(CAT.ext(gen("1"), gen("4")).element([1]))
    with pytest.raises(ValueError):
        TableComplex(nex.terms, nex.diffs[:-1])
    with pytest.raises(ValueError):
        TableComplex(nex.terms[:2], nex.diffs[:1])


# -- weak kernel-cokernel criterion ---------------------------------------------


def test_weak_kc_witnesses_on_cluster():
    q = cluster_quotient()
    cases = {
        ("1", "4"): "covariant sequence not exact at position 2 "
                    "with test object 1/2/3",
        ("1", "3/4"): "covariant sequence not exact at position 2 "
                      "with test object 1/2",
        ("1/2", "4"): "covariant sequence not exact at position 2 "
                      "with test object 1/2/3",
    }
    for (c_label, a_label), expected in cases.items():
        delta = CAT.ext(gen(c_label), gen(a_label)).element([1])
        res = weak_kc_check(CAT, ISO, q, CAT.realize(delta))
        assert not res.passed
        assert res.witness == expected


def test_weak_kc_passes_on_split_realizations():
    q = cluster_quotient()
    for c_label, a_label in [("4", "4"), ("1", "1"), ("1/2/3", "1/2")]:
        delta = CAT.ext(gen(c_label), gen(a_label)).zero()
        res = weak_kc_check(CAT, ISO, q, CAT.realize(delta))
        assert res.passed


def test_weak_kc_passes_everywhere_on_trivial():
    q = trivial_quotient()
    for C in GENS:
        for A in GENS:
            for delta in CAT.ext_elements(C, A):
                assert weak_kc_check(CAT, ISO, q, CAT.realize(delta)).passed


# -- right-fraction hom-sets ------------------------------------------------------


def test_fraction_homs_materialize_the_inverse():
    """Inverting 3/4 -> 2/3/4 creates exactly one new morphism backwards."""
    q = trivial_quotient()
    spec = MorphismClassSpec("saturate", (the_map("3/4", "2/3/4"),))
    fr = FractionHoms(spec, q)
    assert len(fr.reps(gen("2/3/4"), gen("3/4"))) == 2
    assert q.qdim(gen("2/3/4"), gen("3/4")) == 0
    # plain hom-sets that gain nothing keep their size
    assert len(fr.reps(gen("4"), gen("3/4"))) == 2
    assert len(fr.reps(gen("4"), gen("4"))) == 2


def test_fraction_inverse_composes_to_identity():
    q = trivial_quotient()
    g34 = the_map("3/4", "2/3/4")
    spec = MorphismClassSpec("saturate", (g34,))
    fr = FractionHoms(spec, q)
    X, Y = gen("2/3/4"), gen("3/4")
    inverse = next(it for it in fr.reps(X, Y) if it[2] is not None)
    back = fr.postcompose(X, Y, inverse, g34)
    idx = fr.class_index(X, X, back)
    plain_id = fr.class_index(X, X, (X, q.identity_class(X), None))
    assert idx == plain_id


# -- full pipeline verdicts -------------------------------------------------------


def test_localize_cluster_fails_weak_kc():
    rep = cluster_report()
    assert rep.verdict == "fails weak-kc"
    assert rep.exit_code == 20
    assert rep.nf_labels == ("2/3/4",)
    assert rep.checks["weak-kc"].witness == (
        "E(1/2, 4) coords [1]: covariant sequence not exact at "
        "position 2 with test object 1/2/3")
    assert not rep.checks["C1"].passed
    assert rep.checks["C2"].passed
    assert rep.checks["C2'"].passed
    assert rep.checks["C3"].passed
    assert rep.checks["C3'"].passed
    assert rep.skipped["C4"] == "not checked (weak-kc already failed)"
    assert rep.skipped["WIC"] == "not checked (weak-kc already failed)"


def test_localize_cluster_kc_details():
    rep = cluster_report()
    failing = [tag for tag, ok, _ in rep.kc_details if not ok]
    assert failing == ["E(1/2, 4) coords [1]", "E(1, 4) coords [1]",
                       "E(1, 3/4) coords [1]"]
    assert len(rep.kc_details) == 39


def test_localize_trivial_is_exangulated():
    rep = trivial_report()
    assert rep.verdict == "2-exangulated"
    assert rep.exit_code == 0
    for name in ("M0", "MR1", "MR2", "MR3", "weak-kc", "C1", "C2", "C2'",
                 "C3", "C3'", "C4", "WIC", "equivalence", "functor"):
        assert rep.checks[name].passed, name
    # the same instance counts as the unlocalized axiom suite
    assert rep.checks["C1"].checked == 39
    assert rep.checks["C3"].checked == 333
    assert rep.checks["C3'"].checked == 333


def test_localize_projinj_fails_weak_kc():
    rep = localize(CAT, ISO, [2, 3])
    assert rep.verdict == "fails weak-kc"
    assert rep.exit_code == 20
    assert rep.nf_labels == ("2/3/4", "1/2/3")


def test_localize_mr1_control_exits_30():
    f = the_map("4", "3/4")
    h = the_map("3/4", "2/3/4").compose(f)
    rep = localize(CAT, MorphismClassSpec("saturate", (f, h)), [])
    assert rep.verdict == "MR precondition failed"
    assert rep.exit_code == 30
    assert not rep.checks["MR1"].passed
    assert rep.skipped["weak-kc"] == "not checked (MR precondition failed)"
    assert rep.kc_details == ()


def test_localize_saturate_without_seeds_is_weak_only():
    rep = localize(CAT, MorphismClassSpec("saturate"), [])
    assert rep.verdict == "weakly 2-exangulated"
    assert rep.exit_code == 10
    assert rep.checks["weak-kc"].passed
    assert rep.skipped["C4"] == "not computed in saturate mode"
    assert rep.skipped["equivalence"] == "not computed in saturate mode"


def test_localize_saturate_single_seed_fails_mr3():
    rep = localize(CAT, MorphismClassSpec("saturate",
                                          (the_map("3/4", "2/3/4"),)), [])
    assert rep.verdict == "MR precondition failed"
    assert rep.checks["MR1"].passed
    assert rep.checks["MR2"].passed
    assert not rep.checks["MR3"].passed


def test_report_bounds():
    rep = cluster_report()
    assert rep.bounds == {"multiplicity": 2, "endpoint_summands": 2,
                          "path_length": 8}
    assert rep.mode == "iso"
