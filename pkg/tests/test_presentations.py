import pytest

from blowup.posets import chain_poset, point_poset
from blowup.presentations import (
    Cell,
    FaceRef,
    PresentationError,
    StratifiedPresentation,
    boundary_simplex,
    butterfly,
    cone,
    crac,
    extend_i,
    extend_n,
    forget_stratification,
    join,
    nerve,
    normalize,
    plain,
    plain_simplex,
    presentations_isomorphic,
    product,
    product_sphere_cone,
    quotient,
    restrict,
    skeleton,
    standard_simplex,
    tensor_with_standard,
    validate,
)
from blowup.words import (
    collapse_repeats,
    compose,
    degeneracy_word,
    epi_mono_factor,
    face_word,
    joint_collapse,
)


def counts(x):
    out = []
    for d in range(x.max_dim() + 1):
        out.append(len(x.cells_of_dim(d)))
    return out


def euler(x):
    return sum((-1) ** d * n for d, n in enumerate(counts(x)))


# ---------------------------------------------------------------------------
# words


def test_face_and_degeneracy_words():
    assert face_word(2, 0) == (1, 2)
    assert face_word(2, 2) == (0, 1)
    assert degeneracy_word(2, 0) == (0, 0, 1, 2)
    assert degeneracy_word(2, 2) == (0, 1, 2, 2)
    # simplicial identity s^j o d^j = id
    for m in range(4):
        for j in range(m + 1):
            assert compose(degeneracy_word(m, j), face_word(m + 1, j)) == tuple(
                range(m + 1)
            )


def test_epi_mono_factor():
    g = (0, 2, 2, 5)
    delta, sigma = epi_mono_factor(g)
    assert delta == (0, 2, 5)
    assert sigma == (0, 1, 1, 2)
    assert compose(delta, sigma) == g


def test_collapse_repeats():
    core, word = collapse_repeats((0, 0, 1, 1, 1, 3))
    assert core == (0, 1, 3)
    assert word == (0, 0, 1, 1, 1, 2)


def test_joint_collapse():
    f = (0, 0, 1, 1)
    g = (0, 1, 1, 1)
    f2, g2, rho = joint_collapse(f, g)
    assert (f2, g2) == ((0, 0, 1), (0, 1, 1))
    assert rho == (0, 1, 2, 2)
    assert compose(f2, rho) == f and compose(g2, rho) == g
    f3, g3, rho3 = joint_collapse((0, 1), (0, 0))
    assert rho3 is None and (f3, g3) == ((0, 1), (0, 0))


# ---------------------------------------------------------------------------
# simplices, nerves, validation


def test_standard_simplex():
    x = standard_simplex(chain_poset(1), (0, 1, 1))
    assert counts(x) == [3, 3, 1]
    assert validate(x).ok
    assert x.cells["0.1.2"].chain == (0, 1, 1)
    assert x.cells["1.2"].chain == (1, 1)
    assert validate(x).maximal_cells == ["0.1.2"]


def test_standard_simplex_rejects_non_chain():
    with pytest.raises(PresentationError):
        standard_simplex(chain_poset(1), (1, 0))


def test_validation_catches_decreasing_chain():
    bad = StratifiedPresentation(
        chain_poset(1),
        [
            Cell("p", 0, (1,), ()),
            Cell("q", 0, (0,), ()),
            Cell("e", 1, (1, 0), (plain("q"), plain("p"))),
        ],
    )
    report = validate(bad)
    assert not report.ok
    assert any("not a chain" in e for e in report.errors)


def test_validation_catches_chain_mismatch():
    bad = StratifiedPresentation(
        chain_poset(1),
        [
            Cell("p", 0, (0,), ()),
            Cell("q", 0, (0,), ()),
            Cell("e", 1, (0, 1), (plain("q"), plain("p"))),
        ],
    )
    report = validate(bad)
    assert not report.ok
    assert any("chain" in e for e in report.errors)


def test_nerve():
    n = nerve(chain_poset(2))
    assert counts(n) == [3, 3, 1]
    assert validate(n).ok
    assert "0<1<2" in n.cells
    two = nerve(chain_poset(2), max_length=2)
    assert counts(two) == [3, 3]


def test_butterfly_validates():
    b = butterfly()
    assert counts(b) == [5, 6, 2]
    report = validate(b)
    assert report.ok
    assert sorted(report.maximal_cells) == ["abc", "ade"]
    assert "a" not in report.regular_cells
    assert len(report.regular_cells) == 12
    assert sorted(report.nonsingular_cells) == ["b", "bc", "c", "d", "de", "e"]


# ---------------------------------------------------------------------------
# join


def test_crac_shape():
    x = crac()
    assert counts(x) == [3, 3, 1]
    assert validate(x).ok
    assert x.cells["0.1*0"].chain == (0, 0, 1)
    # the singular edge is the last face of the triangle
    assert x.cells["0.1*0"].faces[2] == plain("a.0.1")


def test_join_of_point_with_sphere():
    c = cone(boundary_simplex(2))
    assert counts(c) == [4, 6, 3]
    assert validate(c).ok
    # faces of an apex-edge pair: d_0 drops the apex
    tri = c.cells["0*0.1"]
    assert tri.faces[0] == plain("b.0.1")
    assert tri.chain == (0, 1, 1)


def test_join_recovers_factors():
    a, b = plain_simplex(1), boundary_simplex(2)
    j = join(a, b)
    assert validate(j).ok
    a_part = [c for c in j.cells.values() if set(c.chain) == {0}]
    b_part = [c for c in j.cells.values() if set(c.chain) == {1}]
    assert sorted(c.id for c in a_part) == sorted("a." + i for i in a.cells)
    assert sorted(c.id for c in b_part) == sorted("b." + i for i in b.cells)
    for c in a_part:
        orig = a.cells[c.id[2:]]
        assert c.dim == orig.dim
        assert c.faces == tuple(FaceRef("a." + r.cell, r.word) for r in orig.faces)


def test_join_requires_single_stratum():
    with pytest.raises(PresentationError):
        join(crac(), plain_simplex(0))


# ---------------------------------------------------------------------------
# products


def test_tensor_edge_with_edge():
    x = tensor_with_standard(plain_simplex(1), 1)
    assert counts(x) == [4, 5, 2]
    assert validate(x).ok
    assert euler(x) == 1


def test_tensor_keeps_first_labels():
    x = tensor_with_standard(crac(), 1)
    assert validate(x).ok
    assert x.poset == chain_poset(1)
    for c in x.cells.values():
        assert set(c.chain) <= {0, 1}
    assert euler(x) == euler(crac())


def test_product_with_degenerate_faces():
    # a 2-sphere with one vertex: all faces of the top cell are degenerate
    sphere = quotient(plain_simplex(2), ["0", "1", "2", "0.1", "0.2", "1.2"])
    assert counts(sphere) == [1, 0, 1]
    assert validate(sphere).ok
    x = tensor_with_standard(sphere, 1)
    assert validate(x).ok
    assert counts(x) == [2, 1, 4, 3]
    assert euler(x) == 2


def test_product_sphere_cone():
    x = product_sphere_cone(1, 1)
    assert counts(x) == [12, 48, 63, 27]
    assert validate(x).ok
    assert euler(x) == 0
    assert x.poset == chain_poset(1)
    strata = {c.chain for c in x.cells.values() if c.dim == 3}
    assert strata == {(0, 1, 1, 1), (0, 0, 1, 1)}


def test_product_labels_second():
    x = product(plain_simplex(0), crac(), labels="second")
    assert validate(x).ok
    assert counts(x) == counts(crac())


# ---------------------------------------------------------------------------
# quotient, skeleton


def test_quotient_edge_to_circle():
    circle = quotient(plain_simplex(1), ["0", "1"])
    assert counts(circle) == [1, 1]
    assert validate(circle).ok
    edge = circle.cells["0.1"]
    assert edge.faces == (plain("q"), plain("q"))


def test_quotient_checks_face_closure():
    with pytest.raises(PresentationError):
        quotient(plain_simplex(1), ["0.1"])


def test_quotient_checks_strata():
    with pytest.raises(PresentationError):
        quotient(butterfly(), ["a", "b"])


def test_quotient_of_nothing():
    x = quotient(butterfly(), [])
    assert x == butterfly()


def test_skeleton():
    assert skeleton(plain_simplex(2), 1) == boundary_simplex(2)
    assert skeleton(butterfly(), 0) == StratifiedPresentation(
        chain_poset(1), [butterfly().cells[v] for v in "abcde"]
    )


# ---------------------------------------------------------------------------
# restriction and the two extensions


def test_restrict_butterfly():
    r = restrict(butterfly())
    assert "a" not in r.cells
    assert len(r.cells) == 12
    assert validate(r).ok
    assert r.cells["ab"].faces == (plain("b"), None)
    assert r.cells["abc"].faces == (plain("bc"), plain("ac"), plain("ab"))


def test_restricted_validation_flags_misplaced_slots():
    r = restrict(butterfly())
    cells = list(r.cells.values())
    broken = [
        Cell("ab", 1, (0, 1), (None, None)) if c.id == "ab" else c for c in cells
    ]
    report = validate(StratifiedPresentation(r.poset, broken, restricted=True))
    assert not report.ok


def test_extend_n_butterfly():
    n = extend_n(restrict(butterfly()))
    assert len(n.cells) == 13
    assert validate(n).ok
    assert n.cells["ab"].faces == (plain("b"), plain("v:0"))
    assert presentations_isomorphic(n, butterfly())


def test_extend_n_redirects_with_collapse_words():
    # the triangle of the crac has a singular edge; its collapse is a word
    r = restrict(crac())
    n = extend_n(r)
    assert validate(n).ok
    tri = n.cells["0.1*0"]
    assert tri.faces[2] == FaceRef("v:0", (0, 0))


def test_extend_i_butterfly_splits():
    out = extend_i(restrict(butterfly()))
    assert len(out.cells) == 14
    assert validate(out).ok
    new = [c for c in out.cells if c.startswith("w:")]
    assert sorted(new) == ["w:ab:0", "w:ad:0"]
    # the two triangles no longer share anything
    def component(tri):
        seen = set()
        stack = [tri]
        while stack:
            cid = stack.pop()
            if cid in seen:
                continue
            seen.add(cid)
            stack.extend(r.cell for r in out.cells[cid].faces)
        return seen

    assert not component("abc") & component("ade")


def test_extend_i_crac_closes_up():
    out = extend_i(restrict(crac()))
    assert validate(out).ok
    assert presentations_isomorphic(out, crac())


def test_round_trips():
    for x in (butterfly(), crac(), product_sphere_cone(1, 1)):
        r = restrict(x)
        assert restrict(extend_n(r)) == r
    for x in (butterfly(), crac()):
        r = restrict(x)
        assert restrict(extend_i(r)) == r


def test_normalize_butterfly():
    out = normalize(butterfly())
    assert len(out.cells) == 14
    assert validate(out).ok


def test_extend_i_rejects_words():
    sphere = quotient(plain_simplex(2), ["0", "1", "2", "0.1", "0.2", "1.2"])
    r = restrict(sphere)
    has_word = any(
        ref is not None and ref.word is not None
        for c in r.cells.values()
        for ref in c.faces
    )
    assert has_word
    with pytest.raises(PresentationError):
        extend_i(r)


# ---------------------------------------------------------------------------
# other helpers


def test_forget_stratification():
    x = forget_stratification(butterfly())
    assert x.poset == point_poset()
    assert validate(x).ok
    assert all(set(c.chain) == {0} for c in x.cells.values())


def test_regularity_mask():
    mask = butterfly().regularity_mask()
    assert mask["a"] is False
    assert mask["abc"] is True
    assert sum(mask.values()) == 12


def test_isomorphism_detects_difference():
    assert presentations_isomorphic(butterfly(), butterfly())
    assert not presentations_isomorphic(butterfly(), crac())
    assert not presentations_isomorphic(plain_simplex(1), plain_simplex(2))


def test_face_of_simplex_word_calculus():
    sphere = quotient(plain_simplex(2), ["0", "1", "2", "0.1", "0.2", "1.2"])
    top = sphere.cells["0.1.2"]
    # all faces collapse to the degenerate edge on the base vertex
    assert top.faces == (FaceRef("q", (0, 0)),) * 3
    ref = FaceRef("q", (0, 0))
    assert sphere.face_of_simplex(ref, 0) == plain("q")
    assert sphere.face_of_simplex(ref, 1) == plain("q")
