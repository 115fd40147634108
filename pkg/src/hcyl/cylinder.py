"""Homology cylinders given by admissible presentations.

The generators of an admissible presentation of genus g with l auxiliary
generators are numbered

    1 .. 2g               i_-(gamma_1) .. i_-(gamma_2g)      ("im")
    2g+1 .. 2g+l          z_1 .. z_l
    2g+l+1 .. 4g+l        i_+(gamma_1) .. i_+(gamma_2g)      ("ip")

and there are exactly 2g+l relators.  Every matrix over the group ring of
N_2 lives in the variables g1 .. g{2g}, identified with H_1 of the surface
through i_+; the marking records where the other generators go.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .intlinalg import det as int_det, matmul as int_matmul, smith_normal_form
from .laurent import MonomialAssignment, abelianize, bar, default_vars
from .linalg import FracMatrix, SingularMatrix, matmul, solve_right, vstack
from .words import (Endomorphism, Word, boundary_word, commutator,
                    fox_derivative, fox_jacobian)


class ValidationError(ValueError):
    pass


NOT_CYLINDER = "not a homology cylinder: augmented (A;B) not unimodular"
MARKING_FAILED = "marking solve failed"


@dataclass(frozen=True)
class AdmissiblePresentation:
    genus: int
    aux: int
    relators: tuple[Word, ...]

    def __post_init__(self):
        object.__setattr__(self, "relators", tuple(self.relators))
        if self.genus < 1:
            raise ValidationError("genus must be at least 1")
        if self.aux < 0:
            raise ValidationError("aux must be nonnegative")
        if len(self.relators) != 2 * self.genus + self.aux:
            raise ValidationError(
                f"expected {2 * self.genus + self.aux} relators, got {len(self.relators)}")
        for k, r in enumerate(self.relators, 1):
            if r.max_index() > self.num_gens:
                raise ValidationError(f"relator {k} uses a generator beyond {self.num_gens}")

    @property
    def num_gens(self) -> int:
        return 4 * self.genus + self.aux

    @property
    def vars(self) -> tuple[str, ...]:
        return default_vars(2 * self.genus)

    def im(self, i: int) -> int:
        return i

    def z(self, j: int) -> int:
        return 2 * self.genus + j

    def ip(self, i: int) -> int:
        return 2 * self.genus + self.aux + i

    def gen_name(self, k: int) -> str:
        g2 = 2 * self.genus
        if k <= g2:
            return f"im{k}"
        if k <= g2 + self.aux:
            return f"z{k - g2}"
        return f"ip{k - g2 - self.aux}"


@dataclass
class MarkingData:
    sigma2: list[list[int]]
    assignment: MonomialAssignment


def _exponent_matrix(P: AdmissiblePresentation) -> list[list[int]]:
    """Rows are relators, columns are generators."""
    return [r.exponent_sums(P.num_gens) for r in P.relators]


def validate(P: AdmissiblePresentation) -> MarkingData:
    """Solve the abelianized relations for the classes of the i_- and z
    generators in the basis of the i_+ generators."""
    g2 = 2 * P.genus
    n = g2 + P.aux
    E = _exponent_matrix(P)
    E_unk = [row[:n] for row in E]
    E_ip = [row[n:] for row in E]
    U, D, V = smith_normal_form(E_unk)
    if any(D[i][i] != 1 for i in range(n)):
        raise ValidationError(NOT_CYLINDER)
    # E_unk^-1 = V U since U E V = I
    inv = int_matmul(V, U)
    X = int_matmul(inv, E_ip)
    X = [[-x for x in row] for row in X]  # row u: class of unknown generator u
    sigma2 = [[X[j][i] for j in range(g2)] for i in range(g2)]
    if abs(int_det(sigma2)) != 1:
        raise ValidationError(MARKING_FAILED)
    images = {}
    for u in range(n):
        images[u + 1] = tuple(X[u])
    for i in range(1, g2 + 1):
        images[P.ip(i)] = tuple(int(k == i - 1) for k in range(g2))
    return MarkingData(sigma2, MonomialAssignment(P.vars, images))


def abc_matrices(P: AdmissiblePresentation, M: MarkingData | None = None):
    """(A, B, C): bar-involuted abelianized Fox derivatives, rows indexed by
    generators and columns by relators."""
    if M is None:
        M = validate(P)
    vars = P.vars
    g2 = 2 * P.genus

    def block(gens):
        return FracMatrix([[bar(abelianize(fox_derivative(r, k), M.assignment))
                            for r in P.relators] for k in gens], vars, len(P.relators))

    A = block(range(1, g2 + 1))
    B = block(range(g2 + 1, g2 + P.aux + 1))
    C = block(range(g2 + P.aux + 1, P.num_gens + 1))
    return A, B, C


def magnus(P: AdmissiblePresentation, M: MarkingData | None = None) -> FracMatrix:
    """r_2 from r (A;B) = -C restricted to the first 2g columns.

    The marking already pulls everything back along i_+, so the result is
    r_2 in the variables of N_2 of the surface.
    """
    if M is None:
        M = validate(P)
    A, B, C = abc_matrices(P, M)
    AB = vstack(A, B) if P.aux else A
    try:
        Xt = solve_right(AB.transpose(), (-C).transpose())
    except SingularMatrix:
        raise AssertionError("(A;B) is singular for a validated presentation") from None
    g2 = 2 * P.genus
    return Xt.transpose().submatrix(range(g2), range(g2))


def sigma_act(sigma: Sequence[Sequence[int]], A: FracMatrix) -> FracMatrix:
    """Substitute gamma_i by the monomial of column i of sigma, entrywise."""
    T = [list(r) for r in sigma]
    return A.map_polys(lambda p: p.linear_substitute(T))


# ---------------------------------------------------------------------------
# building presentations


def _shift_word(w: Word, table: dict[int, int]) -> Word:
    return Word([table[abs(a)] if a > 0 else -table[abs(a)] for a in w.letters])


def stack(P1: AdmissiblePresentation, P2: AdmissiblePresentation) -> AdmissiblePresentation:
    """The product M1 . M2, with M2 at the bottom.

    Generators in order: j_-, w, j_+, i_-, z, i_+ (P2's i_-, aux, i_+, then
    P1's); relators: P2's, the gluing relators j_+(gamma) i_-(gamma)^-1,
    then P1's.  The middle four blocks become the new aux block.
    """
    if P1.genus != P2.genus:
        raise ValidationError("genus mismatch")
    g = P1.genus
    g2 = 2 * g
    l1, l2 = P1.aux, P2.aux
    # offsets of each block in the new alphabet
    off_jm, off_w, off_jp = 0, g2, g2 + l2
    off_im, off_z, off_ip = g2 + l2 + g2, g2 + l2 + 2 * g2, g2 + l2 + 2 * g2 + l1
    t2 = {}
    for i in range(1, g2 + 1):
        t2[P2.im(i)] = off_jm + i
        t2[P2.ip(i)] = off_jp + i
    for j in range(1, l2 + 1):
        t2[P2.z(j)] = off_w + j
    t1 = {}
    for i in range(1, g2 + 1):
        t1[P1.im(i)] = off_im + i
        t1[P1.ip(i)] = off_ip + i
    for j in range(1, l1 + 1):
        t1[P1.z(j)] = off_z + j
    rels = [_shift_word(s, t2) for s in P2.relators]
    rels += [Word([off_jp + i, -(off_im + i)]) for i in range(1, g2 + 1)]
    rels += [_shift_word(r, t1) for r in P1.relators]
    return AdmissiblePresentation(g, l1 + l2 + 2 * g2, tuple(rels))


def trivial(g: int) -> AdmissiblePresentation:
    """Sigma x I with relators i_+(gamma_i) i_-(gamma_i)^-1."""
    return AdmissiblePresentation(g, 0, tuple(Word([2 * g + i, -i]) for i in range(1, 2 * g + 1)))


def check_two_connected(phi: Endomorphism) -> list[list[int]]:
    ab = phi.abelianization()
    if abs(int_det(ab)) != 1:
        raise ValidationError("endomorphism is not 2-connected: abelianization not invertible")
    return ab


def from_mapping_class(phi: Endomorphism) -> AdmissiblePresentation:
    """Presentation of the mapping cylinder: i_-(gamma_i) = i_+(phi(gamma_i)).

    Relator i is i_-(gamma_i) . (phi(gamma_i) in i_+ letters)^-1; with this
    orientation magnus() agrees with direct_magnus().
    """
    if phi.rank % 2:
        raise ValidationError("rank must be even")
    check_two_connected(phi)
    g2 = phi.rank
    table = {i: g2 + i for i in range(1, g2 + 1)}
    rels = [Word([i]) * _shift_word(phi.images[i - 1], table).inverse() for i in range(1, g2 + 1)]
    return AdmissiblePresentation(g2 // 2, 0, tuple(rels))


def standard_assignment(rank: int) -> MonomialAssignment:
    return MonomialAssignment(default_vars(rank),
                              {i: tuple(int(k == i - 1) for k in range(rank)) for i in range(1, rank + 1)})


def bar_jacobian(phi: Endomorphism) -> FracMatrix:
    """bar of the abelianized Fox Jacobian, entry (i, j) = d phi(x_j) / d x_i."""
    a = standard_assignment(phi.rank)
    J = fox_jacobian(phi)
    return FracMatrix([[bar(abelianize(x, a)) for x in row] for row in J], a.vars, phi.rank)


def direct_magnus(phi: Endomorphism) -> FracMatrix:
    if phi.rank % 2:
        raise ValidationError("rank must be even")
    check_two_connected(phi)
    return bar_jacobian(phi)


def change_basis(P: AdmissiblePresentation, phi: Endomorphism) -> FracMatrix:
    """The Magnus matrix for the generating system phi(gamma_1), ..."""
    if phi.rank != 2 * P.genus:
        raise ValidationError("automorphism rank does not match 2g")
    check_two_connected(phi)
    M = validate(P)
    r = magnus(P, M)
    J = bar_jacobian(phi)
    return matmul(solve_right(J, r), sigma_act(M.sigma2, J))


# ---------------------------------------------------------------------------
# mapping classes


def tau_zeta(g: int) -> Endomorphism:
    """The twist along the boundary: x -> zeta^-1 x zeta."""
    z = boundary_word(g)
    zi = z.inverse()
    return Endomorphism([zi * Word.gen(i) * z for i in range(1, 2 * g + 1)])


def handle_twist(g: int, handle: int = 1) -> Endomorphism:
    """The boundary twist of one handle: conjugate gamma_h and gamma_{g+h} by
    zeta_h^-1 with zeta_h = [gamma_h, gamma_{g+h}]; fixes zeta."""
    a, b = handle, g + handle
    zh = commutator(Word.gen(a), Word.gen(b))
    images = [Word.gen(i) for i in range(1, 2 * g + 1)]
    for k in (a, b):
        images[k - 1] = zh.inverse() * Word.gen(k) * zh
    return Endomorphism(images)


# ---------------------------------------------------------------------------
# string links


@dataclass
class WirtingerLink:
    """Wirtinger data of a g-strand pure string link in D_g x I.

    ``crossings`` holds g+l words over the admissible alphabet of genus g
    with l aux generators, using only im_{g+j}, z and ip_{g+j}: each is a
    crossing relation o^s a o^-s b^-1 (up to rotation and inversion) or a
    plain a b^-1 for an arc continuing without crossing.  ``framing`` adds
    a power of the meridian to each blackboard longitude.
    """
    genus: int
    aux: int
    crossings: tuple[Word, ...]
    framing: tuple[int, ...] = ()

    def __post_init__(self):
        self.crossings = tuple(self.crossings)
        self.framing = tuple(self.framing) or (0,) * self.genus
        if len(self.framing) != self.genus:
            raise ValidationError("one framing integer per strand")


def _arc_gens(W: WirtingerLink) -> list[int]:
    g = W.genus
    g2 = 2 * g
    arcs = [g + j for j in range(1, g + 1)]
    arcs += [g2 + j for j in range(1, W.aux + 1)]
    arcs += [g2 + W.aux + g + j for j in range(1, g + 1)]
    return arcs


def _rotations(w: Word):
    for base in (w, w.inverse()):
        L = base.letters
        for k in range(len(L)):
            yield L[k:] + L[:k]


def parse_crossing(w: Word) -> tuple[int | None, int, int, int]:
    """(over, s, a, b) with b = over^s a over^-s, or (None, 0, a, b) for b = a."""
    for L in _rotations(w):
        if len(L) == 2 and L[0] > 0 and L[1] < 0 and L[0] != -L[1]:
            return None, 0, L[0], -L[1]
        if len(L) == 4:
            o, a, oi, bi = L
            if o == -oi and a > 0 and bi < 0 and abs(o) not in (a, -bi) and a != -bi:
                return abs(o), (1 if o > 0 else -1), a, -bi
    raise ValidationError(f"malformed crossing relator {w!r}")


def _strand_walk(W: WirtingerLink, parsed, start: int, end: int) -> Word:
    """Blackboard longitude of one strand: the product of over^-s along the
    strand, with s taken in the direction of travel."""
    used = set()
    cur = start
    out = Word()
    steps = 0
    while cur != end:
        nxt = None
        for k, (o, s, a, b) in enumerate(parsed):
            if k in used:
                continue
            if a == cur:
                nxt, s_travel = b, s
            elif b == cur:
                nxt, s_travel = a, -s
            else:
                continue
            used.add(k)
            if o is not None:
                out = out * Word.gen(o, -s_travel)
            break
        if nxt is None:
            raise ValidationError("non-pure input: strand does not reach its endpoint")
        cur = nxt
        steps += 1
        if steps > len(parsed):
            raise ValidationError("non-pure input: strand does not reach its endpoint")
    return out


def check_wirtinger(W: WirtingerLink):
    g = W.genus
    if len(W.crossings) != g + W.aux:
        raise ValidationError(f"expected {g + W.aux} crossing relators, got {len(W.crossings)}")
    arcs = set(_arc_gens(W))
    parsed = []
    for w in W.crossings:
        if any(abs(x) not in arcs for x in w.letters):
            raise ValidationError(f"crossing relator {w!r} uses a non-arc generator")
        parsed.append(parse_crossing(w))
    # union-find over arcs joined at crossings
    parent = {a: a for a in arcs}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for o, s, a, b in parsed:
        parent[find(a)] = find(b)
    g2 = 2 * g
    ims = [g + j for j in range(1, g + 1)]
    ips = [g2 + W.aux + g + j for j in range(1, g + 1)]
    for j in range(g):
        if find(ims[j]) != find(ips[j]):
            raise ValidationError(f"non-pure input: strand {j + 1} does not end at its own position")
    if len({find(x) for x in ims}) != g:
        raise ValidationError("non-pure input: strands are joined")
    if len({find(x) for x in arcs}) != g:
        raise ValidationError("malformed crossing list: an arc is not on any strand")
    return parsed


def longitudes(W: WirtingerLink) -> list[Word]:
    parsed = check_wirtinger(W)
    g = W.genus
    out = []
    for j in range(1, g + 1):
        start = g + j
        end = 2 * g + W.aux + g + j
        delta = _strand_walk(W, parsed, start, end)
        out.append(Word.gen(start, W.framing[j - 1]) * delta)
    return out


def gamma_hat(g: int, j: int) -> Word:
    """[x_1, x_{g+1}] ... [x_{j-1}, x_{g+j-1}] x_j."""
    out = Word()
    for i in range(1, j):
        out = out * commutator(Word.gen(i), Word.gen(g + i))
    return out * Word.gen(j)


def from_string_link(W: WirtingerLink) -> AdmissiblePresentation:
    """Admissible presentation of the cylinder of a pure string link.

    Relator j (j <= g) is i_+(gamma_hat_j) delta_hat_j^-1 i_-(gamma_hat_j)^-1,
    followed by the crossing relators.
    """
    g = W.genus
    deltas = longitudes(W)
    g2 = 2 * g
    to_im = {i: i for i in range(1, g2 + 1)}
    to_ip = {i: g2 + W.aux + i for i in range(1, g2 + 1)}
    rels = []
    for j in range(1, g + 1):
        gh = gamma_hat(g, j)
        rels.append(_shift_word(gh, to_ip) * deltas[j - 1].inverse() * _shift_word(gh, to_im).inverse())
    rels.extend(W.crossings)
    return AdmissiblePresentation(g, W.aux, tuple(rels))
