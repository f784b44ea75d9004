"""Small worked examples: an elliptic curve degeneration, a rank-two Siegel family, and a weight-two triple."""

from __future__ import annotations

from .arithgroup import GroupElement
from .cones import make_cone
from .domain import HodgeFlag, PolarizedLattice
from .linalg import I, Matrix
from .serialize import encode_flag, encode_group_element, encode_lattice, encode_matrix


# -- elliptic: Q(e1, e2) = -1, N e2 = e1 ------------------------------------

def elliptic_lattice() -> PolarizedLattice:
    return PolarizedLattice(Matrix([[0, -1], [1, 0]]), 1, (1, 1))


def elliptic_nilpotent() -> Matrix:
    return Matrix([[0, 1], [0, 0]])


def elliptic_flag() -> HodgeFlag:
    """F^1 = span{e2}."""
    return HodgeFlag.from_spaces(elliptic_lattice(), {1: [(0, 1)]})


def elliptic_twisted_flag() -> HodgeFlag:
    """F^1 = span{e2 + i e1}: a point of D; paired with N the limit is not R-split."""
    return HodgeFlag.from_spaces(elliptic_lattice(), {1: [(I, 1)]})


def elliptic_unipotent() -> GroupElement:
    return GroupElement.generator(Matrix([[1, 1], [0, 1]]), 0)


# -- Siegel: basis (a1, a2, b1, b2), Q = [[0, -I], [I, 0]] ---------------------

def siegel_lattice() -> PolarizedLattice:
    q = Matrix([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]])
    return PolarizedLattice(q, 1, (2, 2))


def siegel_nilpotent(s) -> Matrix:
    """N_S = [[0, S], [0, 0]] for a symmetric 2x2 S; certifies with F^1 = span{b} iff S > 0."""
    (a, b), (c, d) = s
    if b != c:
        raise ValueError("S must be symmetric")
    return Matrix([[0, 0, a, b], [0, 0, b, d], [0, 0, 0, 0], [0, 0, 0, 0]])


def quadric(x, y) -> Matrix:
    """N for the rank-one form (x u + y v)^2."""
    return siegel_nilpotent([[x * x, x * y], [x * y, y * y]])


def siegel_flag() -> HodgeFlag:
    return HodgeFlag.from_spaces(siegel_lattice(), {1: [(0, 0, 1, 0), (0, 0, 0, 1)]})


def levi(a) -> Matrix:
    """diag(A, A^{-T}); acts on the S-coordinates by S -> A S A^T."""
    m = Matrix(a)
    mit = m.inverse().T
    return Matrix([
        [m[0, 0], m[0, 1], 0, 0],
        [m[1, 0], m[1, 1], 0, 0],
        [0, 0, mit[0, 0], mit[0, 1]],
        [0, 0, mit[1, 0], mit[1, 1]],
    ])


def siegel_unipotent(s) -> Matrix:
    return Matrix.identity(4) + siegel_nilpotent(s)


SIEGEL_SWAP = [[0, 1], [1, 0]]
SIEGEL_NEG = [[1, 0], [0, -1]]
SIEGEL_SHEAR = [[1, 1], [0, 1]]


def siegel_generators(shear: bool = True) -> list:
    mats = [SIEGEL_SWAP, SIEGEL_NEG] + ([SIEGEL_SHEAR] if shear else [])
    return [GroupElement.generator(levi(a), k) for k, a in enumerate(mats)]


def siegel_sigma():
    """cone{x^2, y^2}."""
    return make_cone(siegel_lattice(), [quadric(1, 0), quadric(0, 1)])


def siegel_tau():
    """cone{(x+y)^2, (x-y)^2}; meets sigma along the ray of x^2 + y^2."""
    return make_cone(siegel_lattice(), [quadric(1, 1), quadric(1, -1)])


# -- weight two: Q = antidiag(1, -1, 1), h = (1, 1, 1) -----------------------

def weight2_lattice() -> PolarizedLattice:
    return PolarizedLattice(Matrix([[0, 0, 1], [0, -1, 0], [1, 0, 0]]), 2, (1, 1, 1))


def weight2_nilpotent() -> Matrix:
    return Matrix([[0, 1, 0], [0, 0, 1], [0, 0, 0]])


def weight2_flag() -> HodgeFlag:
    return HodgeFlag.from_spaces(weight2_lattice(), {2: [(0, 0, 1)], 1: [(0, 1, 0), (0, 0, 1)]})


# -- sessions -------------------------------------------------------------------

def elliptic_session() -> dict:
    n = elliptic_nilpotent()
    return {
        "lattice": encode_lattice(elliptic_lattice()),
        "nilpotents": {"N": encode_matrix(n), "minusN": encode_matrix(-n)},
        "cones": {"sigma": {"generators": ["N"]}, "flipped": {"generators": ["minusN"]}, "zero": {"generators": []}},
        "flags": {"F": encode_flag(elliptic_flag()), "Ftwist": encode_flag(elliptic_twisted_flag())},
        "gamma_generators": {"T": encode_group_element(elliptic_unipotent())},
        "fan": {"cones": [{"cone": "sigma", "flag": "F"}], "gamma": ["T"], "max_word_len": 2},
    }


def siegel_overlap_session() -> dict:
    """Two cones meeting along x^2 + y^2 with one shared flag: not a weak fan."""
    nil = {"X": quadric(1, 0), "Y": quadric(0, 1), "P": quadric(1, 1), "M": quadric(1, -1),
           "D": siegel_nilpotent([[1, 0], [0, 1]]), "minusD": siegel_nilpotent([[-1, 0], [0, -1]]),
           "E": siegel_nilpotent([[1, 0], [0, 2]]), "K": siegel_nilpotent([[-1, 0], [0, 1]])}
    gens = siegel_generators()
    return {
        "lattice": encode_lattice(siegel_lattice()),
        "nilpotents": {k: encode_matrix(v) for k, v in nil.items()},
        "cones": {"sigma": {"generators": ["X", "Y"]}, "tau": {"generators": ["P", "M"]},
                  "diag": {"generators": ["D"]}, "flipped": {"generators": ["minusD"]},
                  "definite": {"generators": ["D", "E"]}, "mixed": {"generators": ["X", "K"]}},
        "flags": {"F": encode_flag(siegel_flag())},
        "gamma_generators": {"swap": encode_group_element(gens[0]), "neg": encode_group_element(gens[1]),
                             "shear": encode_group_element(gens[2])},
        "fan": {"cones": [{"cone": "sigma", "flag": "F"}, {"cone": "tau", "flag": "F"}],
                "gamma": ["swap", "neg"], "max_word_len": 2},
    }


def star_session() -> dict:
    """Two rays N1 = x^2, N2 = y^2 spanning a 2-dim cone."""
    return {
        "lattice": encode_lattice(siegel_lattice()),
        "nilpotents": {"N1": encode_matrix(quadric(1, 0)), "N2": encode_matrix(quadric(0, 1)),
                       "R": encode_matrix(quadric(1, 0) + quadric(0, 1).scale(2))},
        "cones": {"sigma": {"generators": ["N1", "N2"]}},
        "flags": {"F": encode_flag(siegel_flag())},
        "gamma_generators": {},
        "fan": {"cones": [{"cone": "sigma", "flag": "F"}], "gamma": [], "max_word_len": 0},
    }


def weight2_session() -> dict:
    j = weight2_nilpotent()
    return {
        "lattice": encode_lattice(weight2_lattice()),
        "nilpotents": {"J": encode_matrix(j)},
        "cones": {"sigma": {"generators": ["J"]}},
        "flags": {"F": encode_flag(weight2_flag())},
        "gamma_generators": {},
    }


SESSIONS = {
    "elliptic": elliptic_session,
    "siegel_overlap": siegel_overlap_session,
    "star": star_session,
    "weight2": weight2_session,
}
