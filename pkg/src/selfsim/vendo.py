"""Virtual endomorphisms f: H -> G of pc groups, G-data, and the F-core
witness machinery for groups whose center meets every nontrivial normal
subgroup (torsion-free nilpotent case).

A VirtualEndomorphism keeps a finite- or infinite-index domain subgroup
together with the images of its standard generators; make_vendo checks
that the assignment respects the domain's induced pc relations, which
is a complete homomorphism test.  vendo_from_pairs builds the domain by
shadow sifting, so a map need only be given on any generating set.
"""

from __future__ import annotations

from math import lcm

from selfsim.errors import (
    HomomorphismError,
    InfiniteIndexError,
    OutsideDomainError,
    PresentationError,
)
from selfsim.intlattice import (
    IntMatrix,
    Lattice,
    lattice_intersect,
    lattice_kernel,
    solve_left,
)
from selfsim.pcgroup import (
    GroupElement,
    PcPresentation,
    commutator,
    conjugate,
    graded_image,
)
from selfsim.subgroup import Subgroup, contains, membership_coords, sift


class VirtualEndomorphism:
    """Homomorphism from a subgroup into the ambient group.

    Construct through make_vendo or vendo_from_pairs; the raw
    constructor performs no validation.
    """

    __slots__ = ("domain", "images", "label", "_image_subgroup")

    def __init__(self, domain: Subgroup, images, label=""):
        self.domain = domain
        self.images = tuple(images)
        self.label = label
        self._image_subgroup = None

    def __repr__(self):
        return "VirtualEndomorphism(%s)" % (self.label or "%d gens" % len(self.images))

    @property
    def pres(self) -> PcPresentation:
        return self.domain.pres


def make_vendo(domain: Subgroup, images, label="") -> VirtualEndomorphism:
    """Validated virtual endomorphism given images of the standard sequence.

    The domain's pc relations are the commutators [s_j, s_i] rewritten
    over the sequence; each must collapse under the images.
    """
    images = tuple(images)
    if len(images) != len(domain.seq):
        raise ValueError("need one image per standard generator")
    pres = domain.pres
    for im in images:
        if im.pres is not pres:
            raise PresentationError("image from a different presentation")
    f = VirtualEndomorphism(domain, images, label)
    for i in range(len(domain.seq)):
        for j in range(i + 1, len(domain.seq)):
            c = commutator(domain.seq[j], domain.seq[i])
            coords = membership_coords(domain, c)
            if coords is None:
                raise HomomorphismError(
                    "standard sequence not closed (internal sift failure)"
                )
            expected = _image_of_coords(f, coords)
            got = commutator(images[j], images[i])
            if expected != got:
                raise HomomorphismError(
                    "relation [s_%d, s_%d] is not respected" % (j, i)
                )
    return f


def _image_of_coords(f: VirtualEndomorphism, coords):
    out = f.pres.identity()
    for i, q in enumerate(coords):
        if q:
            out = out * (f.images[i] ** q)
    return out


def vendo_from_pairs(pres: PcPresentation, pairs, label="") -> VirtualEndomorphism:
    """Build a validated endomorphism from (generator, image) pairs.

    The domain is the subgroup generated by the left-hand sides; shadow
    sifting pushes the assignment through to the standard sequence, and
    make_vendo then verifies the homomorphism property.
    """
    gens = [g for g, _ in pairs]
    imgs = [im for _, im in pairs]
    domain, std_images = sift(pres, gens, images=imgs)
    return make_vendo(domain, std_images, label)


def apply(f: VirtualEndomorphism, x: GroupElement) -> GroupElement:
    """Image of x under f; x must lie in the domain."""
    coords = membership_coords(f.domain, x)
    if coords is None:
        raise OutsideDomainError("element outside the domain subgroup")
    return _image_of_coords(f, coords)


def image_subgroup(f: VirtualEndomorphism) -> Subgroup:
    if f._image_subgroup is None:
        f._image_subgroup = sift(f.pres, list(f.images))
    return f._image_subgroup


def is_recurrent(f: VirtualEndomorphism) -> bool:
    """True when f is onto the ambient group."""
    return image_subgroup(f).index() == 1


def graded_blocks(f: VirtualEndomorphism):
    """Induced integer matrices on the graded pieces, weight by weight.

    Requires domain = whole group with the basis as standard sequence.
    """
    pres = f.pres
    if f.domain.index() != 1 or f.domain.lead_exp != (1,) * pres.k:
        raise ValueError("graded blocks need the whole group as domain")
    blocks = []
    for w in (1, 2, 3):
        idxs = list(pres.block(w))
        if not idxs:
            continue
        rows = [graded_image(f.images[i], w) for i in idxs]
        blocks.append(IntMatrix(rows))
    return blocks


def is_injective_endo(f: VirtualEndomorphism) -> bool:
    """Injectivity via nonzero determinants of all graded blocks."""
    return all(b.det() != 0 for b in graded_blocks(f))


# -- convenience constructors used by the witness corpus ----------------


def whole_group(pres: PcPresentation) -> Subgroup:
    return sift(pres, pres.gens())


def identity_endo(pres: PcPresentation) -> VirtualEndomorphism:
    d = whole_group(pres)
    return make_vendo(d, d.seq, "identity")


def inner_endo(pres: PcPresentation, y: GroupElement) -> VirtualEndomorphism:
    d = whole_group(pres)
    return make_vendo(d, [conjugate(s, y) for s in d.seq], "inner")


def trivial_endo(domain: Subgroup) -> VirtualEndomorphism:
    one = domain.pres.identity()
    return make_vendo(domain, [one] * len(domain.seq), "trivial")


def inclusion_endo(domain: Subgroup) -> VirtualEndomorphism:
    return make_vendo(domain, domain.seq, "inclusion")


def compose_with_inner(f: VirtualEndomorphism, y: GroupElement) -> VirtualEndomorphism:
    """y-conjugate of f (still defined on f's domain)."""
    return make_vendo(
        f.domain, [conjugate(im, y) for im in f.images], (f.label or "f") + "^conj"
    )


# -- G-data --------------------------------------------------------------


class GData:
    """Data (m, H, F): finite-index subgroups with virtual endomorphisms.

    The tree arity is m = m_1 + ... + m_s with m_i = [G : H_i].
    """

    __slots__ = ("endos", "m_parts")

    def __init__(self, endos):
        endos = tuple(endos)
        if not endos:
            raise ValueError("G-data needs at least one part")
        pres = endos[0].pres
        parts = []
        for f in endos:
            if f.pres is not pres:
                raise PresentationError("parts over different presentations")
            m = f.domain.index()
            if m is None:
                raise InfiniteIndexError("part domain has infinite index")
            parts.append(m)
        self.endos = endos
        self.m_parts = tuple(parts)

    @property
    def arity(self):
        return sum(self.m_parts)

    def __repr__(self):
        return "GData(m=%s)" % (self.m_parts,)


# -- N_f matrices and the F-core witness ---------------------------------


def min_power_in(h: Subgroup, g: GroupElement) -> int:
    """Least p >= 1 with g^p in H (exists for finite index, pigeonhole)."""
    m = h.index()
    if m is None:
        raise InfiniteIndexError("subgroup has infinite index")
    x = g
    for p in range(1, m + 1):
        if contains(h, x):
            return p
        x = x * g
    raise AssertionError("no power of g in H up to the index bound")


def nf_matrix(f: VirtualEndomorphism, powers=None) -> IntMatrix:
    """Abelianization matrix of f on powered weight-1 generators.

    Row i is the weight-1 graded image of (g_i^p_i)^f; the raw
    exponents are stored, without dividing by p_i.  Default powers are
    the minimal ones landing in the domain.
    """
    pres = f.pres
    w1 = list(pres.block(1))
    if powers is None:
        powers = [min_power_in(f.domain, pres.gen(i)) for i in w1]
    powers = tuple(int(p) for p in powers)
    if len(powers) != len(w1):
        raise ValueError("need one power per weight-1 generator")
    rows = []
    for pos, i in enumerate(w1):
        x = pres.gen(i) ** powers[pos]
        rows.append(graded_image(apply(f, x), 1))
    return IntMatrix(rows)


def invariant_check(f: VirtualEndomorphism, n: Subgroup) -> bool:
    """True iff f maps every standard generator of n back into n.

    n must be contained in the domain; a violation raises.
    """
    for s in n.seq:
        if not contains(f.domain, s):
            raise OutsideDomainError("subgroup not contained in the domain")
    return all(contains(n, apply(f, s)) for s in n.seq)


def is_normal(sub: Subgroup) -> bool:
    """Normality under conjugation by all basis generators."""
    for g in sub.pres.gens():
        for s in sub.seq:
            if not contains(sub, conjugate(s, g)):
                return False
    return True


def _central_rows(pres, k_sub: Subgroup):
    """Standard-sequence elements of K with weight-3 leading index.

    For a graded basis these are exactly the central elements of K when
    the ambient center is the weight-3 block; returns (elements, rows in
    weight-3 coordinates).
    """
    z_block = list(pres.block(3))
    if not z_block:
        return [], []
    lo = z_block[0]
    elems = [s for s, d in zip(k_sub.seq, k_sub.lead_idx) if d >= lo]
    rows = [tuple(s.exps[i] for i in z_block) for s in elems]
    return elems, rows


def _z_lattice_to_subgroup(pres, lat: Lattice) -> Subgroup | None:
    z_block = list(pres.block(3))
    if lat.is_zero():
        return None
    elems = []
    for row in lat.basis.entries:
        exps = [0] * pres.k
        for pos, i in enumerate(z_block):
            exps[i] = row[pos]
        elems.append(pres.element(exps))
    return Subgroup(pres, elems)


def fcore_witness(data: GData, powers=None, max_saturation=64):
    """Verified nontrivial witness subgroup for the F-core, or None.

    Strategy (all claims re-verified on the constructed subgroup):

    * K = <g_i^p_i> for powers p_i making every g_i^p_i lie in every
      part domain; Z(K) is read off K's standard sequence.
    * If every part has det(N_f) != 0, the witness is Z(K).
    * Otherwise intersect Z(K) with the kernels of the induced central
      maps of the degenerate parts; if that is trivial, fall back to
      saturating the largest f-invariant central sublattice.

    Returns None only when no constructed candidate passes
    verification, which would contradict the nonexistence theorem for
    the 4-generator class-3 group this is aimed at.
    """
    pres = data.endos[0].pres
    w1 = list(pres.block(1))
    if powers is None:
        powers = [
            lcm(*(min_power_in(f.domain, pres.gen(i)) for f in data.endos))
            for i in w1
        ]
    powered = [pres.gen(i) ** p for i, p in zip(w1, powers)]
    k_sub = sift(pres, powered)
    z_elems, z_rows = _central_rows(pres, k_sub)
    if not z_rows:
        return None
    nz = len(list(pres.block(3)))
    zmat = IntMatrix(z_rows)
    zk_lat = Lattice(nz, zmat)

    dets = []
    for f in data.endos:
        dets.append(nf_matrix(f, powers).det())

    def verify(candidate: Subgroup | None):
        if candidate is None or not candidate.seq:
            return None
        for f in data.endos:
            for s in candidate.seq:
                if not contains(f.domain, s):
                    return None
            if not invariant_check(f, candidate):
                return None
        if not is_normal(candidate):
            return None
        return candidate

    if all(d != 0 for d in dets):
        return verify(Subgroup(pres, z_elems))

    # central maps of the degenerate parts, in weight-3 coordinates
    z_block = list(pres.block(3))
    bad = [f for f, d in zip(data.endos, dets) if d == 0]
    maps = []
    for f in bad:
        rows = []
        for s in z_elems:
            im = apply(f, s)
            if any(im.exps[i] for i in range(pres.k) if i not in z_block):
                raise HomomorphismError("central element mapped outside the center")
            rows.append(tuple(im.exps[i] for i in z_block))
        maps.append(IntMatrix(rows))

    kernel_lat = zk_lat
    for m in maps:
        coeff_kernel = lattice_kernel(m)
        rows = [
            tuple(
                sum(c[i] * z_rows[i][j] for i in range(len(z_rows)))
                for j in range(nz)
            )
            for c in coeff_kernel.basis.entries
        ]
        kernel_lat = lattice_intersect(kernel_lat, Lattice.from_rows(nz, rows))
    got = verify(_z_lattice_to_subgroup(pres, kernel_lat))
    if got is not None:
        return got

    # saturation fallback: largest central sublattice with L^f <= L
    lat = zk_lat
    nb = len(z_rows)
    for _ in range(max_saturation):
        if lat.is_zero():
            return None
        coeffs = _invariant_coeffs(zmat, maps, lat)
        new_lat = Lattice.from_rows(
            nz,
            [
                tuple(sum(c[i] * z_rows[i][j] for i in range(nb)) for j in range(nz))
                for c in coeffs
            ],
        )
        if new_lat == lat:
            return verify(_z_lattice_to_subgroup(pres, lat))
        lat = new_lat
    return None


def _invariant_coeffs(zmat: IntMatrix, maps, lat: Lattice):
    """Coefficient vectors c with c*zmat in lat and c*m in lat for all m."""
    nb = zmat.rows
    if lat.basis.rows == 0:
        return []
    targets = [zmat] + list(maps)
    # stack: unknowns (c | d_1 | ... | d_t) with c*M_t = d_t * basis
    bl = lat.basis
    cols = sum(t.cols for t in targets)
    rows = []
    for i in range(nb):
        row = []
        for t in targets:
            row.extend(t.entries[i])
        rows.append(tuple(row))
    for t_i in range(len(targets)):
        for b_i in range(bl.rows):
            row = []
            for t_j, t in enumerate(targets):
                if t_j == t_i:
                    row.extend(-e for e in bl.entries[b_i])
                else:
                    row.extend([0] * t.cols)
            rows.append(tuple(row))
    ker = lattice_kernel(IntMatrix(rows))
    out = []
    for krow in ker.basis.entries:
        c = krow[:nb]
        if any(c):
            out.append(c)
    return out
