"""Split composition algebras and the cubic Jordan algebras Herm3(A).

The four Severi varieties are the rank-one loci of Herm3(A) for the split
composition algebras of dimension 1, 2, 4, 8:

========== ======== ==== ==== =====================
model      algebra  dim  N    X
========== ======== ==== ==== =====================
veronese   k        6    5    Veronese surface
segre      k + k    9    8    Segre P2 x P2
grass      M2(k)    15   14   Grassmannian G(1,5)
e6         Zorn     27   26   Cartan variety E6
========== ======== ==== ==== =====================

Conventions (fixed here, and only here)
---------------------------------------
An element is stored as the flat vector ``[alpha, beta, gamma, a, b, c]``
with ``a, b, c`` in A, standing for the Hermitian matrix::

    [ alpha   c      conj(b) ]
    [ conj(c) beta   a       ]
    [ b       conj(a) gamma  ]

    N(x)  = alpha beta gamma - alpha n(a) - beta n(b) - gamma n(c) + t(abc)
    x#    = (beta gamma - n(a), gamma alpha - n(b), alpha beta - n(c);
             conj(c) conj(b) - alpha a,
             conj(a) conj(c) - beta b,
             conj(b) conj(a) - gamma c)
    T(x, y) = alpha alpha' + beta beta' + gamma gamma' + n(a, a') + n(b, b') + n(c, c')

with n(a, a') = t(a conj(a')).  The cross product is the polarisation
x × y = (x + y)# - x# - y#, so x × x = 2 x#, and the full polarisation of the
norm is N(x, y, z) = T(x × y, z).  In the veronese model the matrix above is
the symmetric matrix [[alpha, c, b], [c, beta, a], [b, a, gamma]], N is its
determinant and # its adjugate.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import DegenerateSample, PreconditionError
from .linalg import Field, PrimeField, RationalField, make_field


def _ident(a):
    return a


class CompositionAlgebra:
    """A split composition algebra; elements are arrays with trailing axis ``dim``."""

    name: str
    dim: int

    def mul(self, x, y, red=_ident):
        raise NotImplementedError

    def conj(self, x):
        raise NotImplementedError

    def norm(self, x, red=_ident):
        raise NotImplementedError

    def trace(self, x, red=_ident):
        raise NotImplementedError

    def one(self) -> np.ndarray:
        raise NotImplementedError

    def bilinear(self, x, y, red=_ident):
        """Polar form n(x, y) = t(x conj(y)); n(x, x) = 2 n(x)."""
        return self.trace(self.mul(x, self.conj(y), red), red)

    def __repr__(self) -> str:
        return f"<{self.name} algebra, dim {self.dim}>"


class Unarion(CompositionAlgebra):
    name, dim = "unarion", 1

    def mul(self, x, y, red=_ident):
        return red(x * y)

    def conj(self, x):
        return x

    def norm(self, x, red=_ident):
        return red(x[..., 0] * x[..., 0])

    def trace(self, x, red=_ident):
        return red(2 * x[..., 0])

    def one(self):
        return np.array([1], dtype=object)


class SplitComplex(CompositionAlgebra):
    """k + k with the swap involution."""

    name, dim = "split-complex", 2

    def mul(self, x, y, red=_ident):
        return red(x * y)

    def conj(self, x):
        return x[..., ::-1]

    def norm(self, x, red=_ident):
        return red(x[..., 0] * x[..., 1])

    def trace(self, x, red=_ident):
        return red(x[..., 0] + x[..., 1])

    def one(self):
        return np.array([1, 1], dtype=object)


class SplitQuaternion(CompositionAlgebra):
    """2x2 matrices [[x0, x1], [x2, x3]]; conjugation is the adjugate."""

    name, dim = "split-quaternion", 4

    def mul(self, x, y, red=_ident):
        x0, x1, x2, x3 = (x[..., i] for i in range(4))
        y0, y1, y2, y3 = (y[..., i] for i in range(4))
        return red(
            np.stack(
                [x0 * y0 + x1 * y2, x0 * y1 + x1 * y3, x2 * y0 + x3 * y2, x2 * y1 + x3 * y3],
                axis=-1,
            )
        )

    def conj(self, x):
        return np.stack([x[..., 3], -x[..., 1], -x[..., 2], x[..., 0]], axis=-1)

    def norm(self, x, red=_ident):
        return red(x[..., 0] * x[..., 3] - x[..., 1] * x[..., 2])

    def trace(self, x, red=_ident):
        return red(x[..., 0] + x[..., 3])

    def one(self):
        return np.array([1, 0, 0, 1], dtype=object)


def _dot3(u, v):
    return u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1] + u[..., 2] * v[..., 2]


def _cross3(u, v):
    return np.stack(
        [
            u[..., 1] * v[..., 2] - u[..., 2] * v[..., 1],
            u[..., 2] * v[..., 0] - u[..., 0] * v[..., 2],
            u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0],
        ],
        axis=-1,
    )


class SplitOctonion(CompositionAlgebra):
    """Zorn vector matrices [[a, u], [v, b]] stored as (a, u0, u1, u2, v0, v1, v2, b).

    (a, u, v, b)(a', u', v', b') =
        (aa' + u.v',  a u' + b' u - v x v',  a' v + b v' + u x u',  bb' + v.u')
    with norm ab - u.v and conjugate (b, -u, -v, a).
    """

    name, dim = "split-octonion", 8

    def mul(self, x, y, red=_ident):
        a, u, v, b = x[..., 0], x[..., 1:4], x[..., 4:7], x[..., 7]
        a2, u2, v2, b2 = y[..., 0], y[..., 1:4], y[..., 4:7], y[..., 7]
        top = a * a2 + _dot3(u, v2)
        uu = a[..., None] * u2 + b2[..., None] * u - _cross3(v, v2)
        vv = a2[..., None] * v + b[..., None] * v2 + _cross3(u, u2)
        bot = b * b2 + _dot3(v, u2)
        return red(np.concatenate([np.asarray(top)[..., None], uu, vv, np.asarray(bot)[..., None]], axis=-1))

    def conj(self, x):
        return np.concatenate([x[..., 7:8], -x[..., 1:7], x[..., 0:1]], axis=-1)

    def norm(self, x, red=_ident):
        return red(x[..., 0] * x[..., 7] - _dot3(x[..., 1:4], x[..., 4:7]))

    def trace(self, x, red=_ident):
        return red(x[..., 0] + x[..., 7])

    def one(self):
        return np.array([1, 0, 0, 0, 0, 0, 0, 1], dtype=object)


ALGEBRAS = {1: Unarion(), 2: SplitComplex(), 4: SplitQuaternion(), 8: SplitOctonion()}
MODELS = {"veronese": 1, "segre": 2, "grass": 4, "e6": 8}
MODEL_ALIASES = {
    "unarion": "veronese",
    "split-complex": "segre",
    "split-quaternion": "grass",
    "split-octonion": "e6",
}


def model_name(model: str) -> str:
    model = MODEL_ALIASES.get(model, model)
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}; choose from {sorted(MODELS)}")
    return model


# --------------------------------------------------------------------------
# direct formulas; batched over leading axes, exact for any ring


def _split(x, d):
    return x[..., 0], x[..., 1], x[..., 2], x[..., 3 : 3 + d], x[..., 3 + d : 3 + 2 * d], x[..., 3 + 2 * d :]


def norm_direct(A: CompositionAlgebra, x, red=_ident):
    al, be, ga, a, b, c = _split(x, A.dim)
    abc = A.mul(A.mul(a, b, red), c, red)
    out = red(red(al * be) * ga)
    out = out - red(al * A.norm(a, red)) - red(be * A.norm(b, red)) - red(ga * A.norm(c, red))
    return red(out + A.trace(abc, red))


def adjoint_direct(A: CompositionAlgebra, x, red=_ident):
    al, be, ga, a, b, c = _split(x, A.dim)
    ca, cb, cc = A.conj(a), A.conj(b), A.conj(c)
    diag = [
        red(be * ga - A.norm(a, red)),
        red(ga * al - A.norm(b, red)),
        red(al * be - A.norm(c, red)),
    ]
    aa = red(A.mul(cc, cb, red) - al[..., None] * a)
    bb = red(A.mul(ca, cc, red) - be[..., None] * b)
    cc_ = red(A.mul(cb, ca, red) - ga[..., None] * c)
    return np.concatenate([np.stack(diag, axis=-1), aa, bb, cc_], axis=-1)


def trace_direct(A: CompositionAlgebra, x, y, red=_ident):
    d = A.dim
    xs, ys = _split(x, d), _split(y, d)
    out = xs[0] * ys[0] + xs[1] * ys[1] + xs[2] * ys[2]
    for i in range(3, 6):
        out = out + A.bilinear(xs[i], ys[i], red)
    return red(out)


@lru_cache(maxsize=None)
def _structure(model: str):
    """Integer structure tensors of a model: cross product and trace Gram matrix."""
    A = ALGEBRAS[MODELS[model]]
    n = 3 + 3 * A.dim
    E = np.zeros((n, n), dtype=object)
    for i in range(n):
        E[i, i] = 1
    sharp = adjoint_direct(A, E)  # row i = e_i#
    C = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i, n):
            if i == j:
                col = 2 * sharp[i]
            else:
                col = adjoint_direct(A, E[i] + E[j]) - sharp[i] - sharp[j]
            C[:, i, j] = np.asarray(col, dtype=np.int64)
            C[:, j, i] = C[:, i, j]
    G = np.asarray(
        [[trace_direct(A, E[i], E[j]) for j in range(n)] for i in range(n)], dtype=np.int64
    )
    return C, G


class JordanSpace:
    """Herm3(A) over a chosen field: the ambient space of one Severi model.

    Elements are 1-d arrays of length ``dim`` in the field's array type.
    """

    def __init__(self, model: str, field=31991):
        self.model = model_name(model)
        self.field: Field = make_field(field)
        if self.field.characteristic in (2, 3):
            raise PreconditionError("characteristic 2 and 3 are not supported")
        self.algebra = ALGEBRAS[MODELS[self.model]]
        d = self.algebra.dim
        self.dim = 3 + 3 * d
        self.N = self.dim - 1  # ambient projective dimension
        self.n = 2 * d  # dimension of the Severi variety X
        assert 3 * self.n == 2 * (self.N - 2)
        C, G = _structure(self.model)
        if isinstance(self.field, RationalField):
            self._C = self.field.array(C)
            self._G = self.field.array(G)
        else:
            self._C, self._G = C, G
        self._inv2 = self.field.inv(2)
        self._inv3 = self.field.inv(3)

    def __repr__(self) -> str:
        return f"JordanSpace({self.model!r}, {self.field.name})"

    def __eq__(self, other) -> bool:
        return isinstance(other, JordanSpace) and (self.model, self.field) == (other.model, other.field)

    def __hash__(self) -> int:
        return hash((self.model, self.field))

    # -- construction ------------------------------------------------------

    def element(self, values) -> np.ndarray:
        v = self.field.array(values)
        if v.shape[-1] != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {v.shape[-1]}")
        return v

    def zero(self) -> np.ndarray:
        return self.field.zeros(self.dim)

    def identity(self) -> np.ndarray:
        return self.element([1, 1, 1] + [0] * (3 * self.algebra.dim))

    def E(self, i: int) -> np.ndarray:
        """Diagonal idempotent E_ii, i in {1, 2, 3}."""
        v = self.zero()
        v[i - 1] = 1
        return v

    def diag(self, a, b, c) -> np.ndarray:
        return self.element([a, b, c] + [0] * (3 * self.algebra.dim))

    def basis_vector(self, i: int) -> np.ndarray:
        v = self.zero()
        v[i] = 1
        return v

    def from_parts(self, alpha, beta, gamma, a, b, c) -> np.ndarray:
        return self.element([alpha, beta, gamma, *list(a), *list(b), *list(c)])

    def random(self, rng: np.random.Generator) -> np.ndarray:
        return self.field.random(rng, self.dim)

    # -- the cubic structure ---------------------------------------------

    def norm_form(self, x):
        """Cubic norm N(x) (the determinant in the veronese and segre models)."""
        return norm_direct(self.algebra, np.asarray(x), self.field.reduce)

    def adjoint(self, x):
        """Sharp map x -> x#, with x## = N(x) x."""
        return adjoint_direct(self.algebra, np.asarray(x), self.field.reduce)

    def cross_matrix(self, x) -> np.ndarray:
        """Matrix of the linear map y -> x × y."""
        return self.field.reduce(np.tensordot(self._C, np.asarray(x), axes=([1], [0])))

    def cross(self, x, y):
        return self.field.reduce(self.cross_matrix(x) @ np.asarray(y))

    def trace_form(self, x, y):
        return self.field.reduce(np.asarray(x) @ self.field.reduce(self._G @ np.asarray(y)))

    def trace_covector(self, x) -> np.ndarray:
        """The linear form T(x, .) as a coefficient vector."""
        return self.field.reduce(self._G @ np.asarray(x))

    def trilinear_norm(self, x, y, z):
        """Full polarisation of N: symmetric trilinear with N(x, x, x) = 6 N(x)."""
        return self.trace_form(self.cross(x, y), z)

    def rank_of(self, x) -> int:
        x = np.asarray(x)
        if not np.any(x != 0):
            return 0
        if not np.any(self.adjoint(x) != 0):
            return 1
        if self.norm_form(x) == 0:
            return 2
        return 3

    def U(self, g) -> np.ndarray:
        """Matrix of the quadratic representation y -> T(g, y) g - g# × y.

        N(U_g y) = N(g)^2 N(y), so for N(g) != 0 this is a projective
        automorphism preserving X and SX.
        """
        g = np.asarray(g)
        return self.field.reduce(
            np.outer(g, self.trace_covector(g)) - self.cross_matrix(self.adjoint(g))
        )

    # -- points of X -------------------------------------------------------

    def rank_one_map(self, v) -> np.ndarray:
        """The quadratic map v -> v v* on triples, without normalisation.

        Lands in X whenever v1, v2, v3 generate an associative subalgebra, in
        particular when v1 is a scalar; unchecked.
        """
        A, red = self.algebra, self.field.reduce
        v1, v2, v3 = self.field.array(v).reshape(3, A.dim)
        parts = [
            np.array([A.norm(v1, red), A.norm(v2, red), A.norm(v3, red)], dtype=self.field.dtype),
            A.mul(v2, A.conj(v3), red),
            A.mul(v3, A.conj(v1), red),
            A.mul(v1, A.conj(v2), red),
        ]
        return red(np.concatenate([np.asarray(a, dtype=self.field.dtype) for a in parts]))

    def rank_one_point(self, v) -> np.ndarray:
        """The rank-one element with diagonal (n(v1), n(v2), n(v3)).

        Off-diagonal entries are a = w2 conj(w3), b = w3 conj(w1),
        c = w1 conj(w2) / n(v_i) with w_j = v_j conj(v_i), where v_i is the
        first coordinate of nonzero norm.  Normalising makes w_i a scalar, so
        the w_j lie in an associative subalgebra even for split octonions;
        in the associative models this is the plain v v* formula.  The result
        is still checked to satisfy x# = 0.
        """
        A, F = self.algebra, self.field
        red = F.reduce
        v = F.array(v).reshape(3, A.dim)
        if not np.any(v != 0):
            raise PreconditionError("rank_one_point needs a nonzero triple")
        norms = [A.norm(vi, red) for vi in v]
        i = next((k for k, nk in enumerate(norms) if nk != 0), None)
        if i is not None:
            w = np.stack([A.mul(vj, A.conj(v[i]), red) for vj in v])
            scale = F.inv(norms[i])
        else:
            w, scale = v, F(1)
        w1, w2, w3 = w
        off = np.concatenate(
            [A.mul(w2, A.conj(w3), red), A.mul(w3, A.conj(w1), red), A.mul(w1, A.conj(w2), red)]
        )
        x = np.concatenate(
            [np.array(norms, dtype=F.dtype), red(np.asarray(off, dtype=F.dtype) * scale)]
        )
        x = red(np.asarray(x, dtype=F.dtype))
        if np.any(self.adjoint(x) != 0) or not np.any(x != 0):
            raise DegenerateSample("rank_one_point failed the x# = 0 gate")
        return x

    # -- models as matrices ------------------------------------------------

    def as_matrix(self, x) -> np.ndarray:
        """3x3 matrix of x in the veronese (symmetric) or segre (M3) model."""
        x = np.asarray(x)
        # plain indexing keeps object entries scalar (x[..., 0] would give 0-d arrays)
        al, be, ga = x[0], x[1], x[2]
        d = self.algebra.dim
        a, b, c = x[3:3 + d], x[3 + d:3 + 2 * d], x[3 + 2 * d:]
        if self.model == "veronese":
            return np.array([[al, c[0], b[0]], [c[0], be, a[0]], [b[0], a[0], ga]], dtype=x.dtype)
        if self.model == "segre":
            return np.array([[al, c[0], b[1]], [c[1], be, a[0]], [b[0], a[1], ga]], dtype=x.dtype)
        raise ValueError("as_matrix is defined for the veronese and segre models")

    def from_matrix(self, M) -> np.ndarray:
        M = np.asarray(M, dtype=object)
        if self.model == "veronese":
            return self.element([M[0, 0], M[1, 1], M[2, 2], M[1, 2], M[0, 2], M[0, 1]])
        if self.model == "segre":
            return self.element(
                [M[0, 0], M[1, 1], M[2, 2], M[1, 2], M[2, 1], M[2, 0], M[0, 2], M[0, 1], M[1, 0]]
            )
        raise ValueError("from_matrix is defined for the veronese and segre models")


def jordan_space(model: str, field=31991) -> JordanSpace:
    return JordanSpace(model, field)


__all__ = [
    "ALGEBRAS",
    "MODELS",
    "CompositionAlgebra",
    "JordanSpace",
    "PrimeField",
    "jordan_space",
    "model_name",
]
