"""Dense Nystrom matrices for the four Helmholtz boundary operators.

Every discrete operator acts on nodal vectors over the 2N-point grid.  The
product quadrature against a weight psi_m is the circulant matrix W_m (its
symbol is 2 pi psihat_m), so a weighted kernel block is the elementwise
product W_m * K with K the sampled smooth kernel factor.  Families:

    plain:  V = W1*A + W0*B,           K  = W1*(C sin^2) + W0*D
    tilde:  V~ = Lambda + W2*At + W0*B, K~ = W2*C + W0*D
    T  = W1*E + W0*F,   H = D Lambda D + T

Transpose variants sample the kernels with swapped arguments.  The tilde
single layer is stored via its smooth remainder R~ = W2*At + W0*B so the
formulations can use Lambda and R~ separately.

Matrices assemble in O(N^2 log N) and are immutable once built; N <= 512 is
the design target, so dense storage and direct factorization are fine.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .fourier import conv_matrix, dld_matrix, lambda_matrix, weight_table
from .geometry import ParametricCurve
from .kernels import KernelContext, ef_matrices, kernel_matrix, sin2_matrix

__all__ = [
    "DiscreteOperator",
    "OperatorFamily",
    "assemble_v",
    "assemble_k",
    "assemble_kt",
    "assemble_r_tilde",
    "assemble_t",
    "assemble_h",
    "save_operator",
    "load_operator",
]

_MIN_N = 8


@dataclass(frozen=True)
class DiscreteOperator:
    """2N x 2N complex matrix tagged with its continuous counterpart."""

    matrix: np.ndarray
    family: str           # "plain" | "tilde" | "spectral"
    continuous_id: str    # "V" | "K" | "Kt" | "H" | "T" | "R"
    k: complex
    N: int

    def apply(self, v):
        return self.matrix @ np.asarray(v, dtype=complex)

    def __matmul__(self, v):
        return self.apply(v)


def _check_n(N: int):
    if N < _MIN_N:
        raise ValueError(f"N must be >= {_MIN_N}")


class OperatorFamily:
    """Lazy cache of all discrete operators for one (curve, k, N) triple."""

    def __init__(self, curve: ParametricCurve, k, N: int, oversample: int = 1):
        _check_n(N)
        self.ctx = KernelContext(curve, k)
        self.N = N
        self.oversample = oversample

    def _kernel(self, which):
        return kernel_matrix(self.ctx, which, self.N).values

    @cached_property
    def _w0(self):
        return conv_matrix(weight_table(0, self.N))

    @cached_property
    def _w1(self):
        return conv_matrix(weight_table(1, self.N))

    @cached_property
    def _w2(self):
        return conv_matrix(weight_table(2, self.N))

    @cached_property
    def _sin2(self):
        return sin2_matrix(self.N)

    @cached_property
    def lambda_mat(self):
        return lambda_matrix(self.N)

    @cached_property
    def dld_mat(self):
        return dld_matrix(self.N)

    def _wrap(self, matrix, family, cid):
        return DiscreteOperator(matrix, family, cid, self.ctx.k, self.N)

    @cached_property
    def v_plain(self):
        m = self._w1 * self._kernel("A") + self._w0 * self._kernel("B")
        return self._wrap(m, "plain", "V")

    @cached_property
    def r_tilde(self):
        m = self._w2 * self._kernel("At") + self._w0 * self._kernel("B")
        return self._wrap(m, "tilde", "R")

    @cached_property
    def v_tilde(self):
        return self._wrap(self.lambda_mat + self.r_tilde.matrix, "tilde", "V")

    @cached_property
    def k_plain(self):
        m = self._w1 * (self._kernel("C") * self._sin2) + self._w0 * self._kernel("D")
        return self._wrap(m, "plain", "K")

    @cached_property
    def kt_plain(self):
        c_t = self._kernel("C").T
        d_t = self._kernel("D").T
        m = self._w1 * (c_t * self._sin2) + self._w0 * d_t
        return self._wrap(m, "plain", "Kt")

    @cached_property
    def k_tilde(self):
        m = self._w2 * self._kernel("C") + self._w0 * self._kernel("D")
        return self._wrap(m, "tilde", "K")

    @cached_property
    def kt_tilde(self):
        m = self._w2 * self._kernel("C").T + self._w0 * self._kernel("D").T
        return self._wrap(m, "tilde", "Kt")

    @cached_property
    def t_op(self):
        e_mat, f_mat = ef_matrices(self.ctx, self.N, self.oversample)
        return self._wrap(self._w1 * e_mat + self._w0 * f_mat, "plain", "T")

    @cached_property
    def h_op(self):
        return self._wrap(self.dld_mat + self.t_op.matrix, "plain", "H")


def assemble_v(ctx: KernelContext, N: int, family: str = "plain") -> DiscreteOperator:
    """Discrete single layer; 'plain' log-split or 'tilde' Lambda-split."""
    fam = OperatorFamily(ctx.curve, ctx.k, N)
    if family == "plain":
        return fam.v_plain
    if family == "tilde":
        return fam.v_tilde
    raise ValueError("family must be 'plain' or 'tilde'")


def assemble_k(ctx: KernelContext, N: int, family: str = "plain") -> DiscreteOperator:
    """Discrete double layer."""
    fam = OperatorFamily(ctx.curve, ctx.k, N)
    return fam.k_plain if family == "plain" else fam.k_tilde


def assemble_kt(ctx: KernelContext, N: int, family: str = "plain") -> DiscreteOperator:
    """Discrete adjoint double layer (kernels sampled with swapped arguments)."""
    fam = OperatorFamily(ctx.curve, ctx.k, N)
    return fam.kt_plain if family == "plain" else fam.kt_tilde


def assemble_r_tilde(ctx: KernelContext, N: int) -> DiscreteOperator:
    """Smooth remainder R~ of the Lambda-split single layer."""
    return OperatorFamily(ctx.curve, ctx.k, N).r_tilde


def assemble_t(ctx: KernelContext, N: int, oversample: int = 1) -> DiscreteOperator:
    """Weakly singular part T of the hypersingular operator."""
    return OperatorFamily(ctx.curve, ctx.k, N, oversample).t_op


def assemble_h(ctx: KernelContext, N: int, oversample: int = 1) -> DiscreteOperator:
    """Hypersingular operator H = D Lambda D + T (exact on T_N)."""
    return OperatorFamily(ctx.curve, ctx.k, N, oversample).h_op


_MAGIC = b"HBOP"
_HEADER = struct.Struct("<4sI q dd 8s 8s")


def save_operator(op: DiscreteOperator, path) -> None:
    """Binary dump: header (N, k, ids) + row-major complex doubles."""
    k = complex(op.k)
    header = _HEADER.pack(
        _MAGIC,
        1,
        op.N,
        k.real,
        k.imag,
        op.family.encode().ljust(8, b"\0"),
        op.continuous_id.encode().ljust(8, b"\0"),
    )
    mat = np.ascontiguousarray(op.matrix, dtype=np.complex128)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(mat.tobytes())


def load_operator(path) -> DiscreteOperator:
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
        if len(raw) != _HEADER.size or raw[:4] != _MAGIC:
            raise ValueError("not an operator dump")
        magic, version, n, kr, ki, fam, cid = _HEADER.unpack(raw)
        if version != 1:
            raise ValueError(f"unsupported dump version {version}")
        data = np.frombuffer(fh.read(), dtype=np.complex128)
    size = 2 * n
    matrix = data.reshape(size, size).copy()
    k = kr if ki == 0.0 else complex(kr, ki)
    return DiscreteOperator(
        matrix,
        fam.rstrip(b"\0").decode(),
        cid.rstrip(b"\0").decode(),
        k,
        n,
    )
