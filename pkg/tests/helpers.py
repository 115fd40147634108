"""Small shared builders for the test modules."""
from hypothesis import strategies as st

from hcyl.cylinder import from_mapping_class, handle_twist, tau_zeta
from hcyl.linalg import FracMatrix
from hcyl.words import Endomorphism, Word, boundary_word, commutator

from oracles import is_zero, rat_to_sympy


def same_matrix(F: FracMatrix, S) -> bool:
    """Entrywise equality of a FracMatrix with a sympy matrix."""
    if (F.rows, F.cols) != tuple(S.shape):
        return False
    return all(is_zero(rat_to_sympy(F[i, j]) - S[i, j]) for i in range(F.rows) for j in range(F.cols))


def _gen(i):
    return Word.gen(i)


def _conj(w: Word, c: Word) -> Word:
    return c * w * c.inverse()


def handle_generators(g: int) -> list[Endomorphism]:
    """Mapping classes of Sigma_{g,1} fixing zeta = prod [x_i, x_{g+i}] and
    their inverses: on each handle (a, b) the twists b -> b a and a -> a b^-1,
    the handle boundary twist, and the full boundary twist."""
    out = []
    ident = [_gen(i) for i in range(1, 2 * g + 1)]
    for h in range(1, g + 1):
        a, b = h, g + h
        for k, image in ((b, _gen(b) * _gen(a)), (b, _gen(b) * _gen(a).inverse()),
                         (a, _gen(a) * _gen(b).inverse()), (a, _gen(a) * _gen(b))):
            ims = list(ident)
            ims[k - 1] = image
            out.append(Endomorphism(ims))
        out.append(handle_twist(g, h))
        zh = commutator(_gen(a), _gen(b))
        ims = list(ident)
        ims[a - 1], ims[b - 1] = _conj(_gen(a), zh), _conj(_gen(b), zh)
        out.append(Endomorphism(ims))
    out.append(tau_zeta(g))
    z = boundary_word(g)
    out.append(Endomorphism([_conj(x, z) for x in ident]))
    return out


def mapping_classes(g: int, max_len: int = 4):
    gens = handle_generators(g)
    return st.lists(st.sampled_from(range(len(gens))), min_size=1, max_size=max_len).map(
        lambda idx: _compose([gens[i] for i in idx], g))


def _compose(fs, g):
    out = Endomorphism.identity(2 * g)
    for f in fs:
        out = f.compose(out)
    return out


def mapping_cylinders(g: int, max_len: int = 3):
    return mapping_classes(g, max_len).map(from_mapping_class)
