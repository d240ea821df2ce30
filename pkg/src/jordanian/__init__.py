"""Exact function-field constructions of Jordanian and Cremmer-Gervais R-matrices."""
from .constructors import (
    b_cg,
    classical_rp,
    hecke_to_mqybe,
    make_boundary_op,
    make_cg_op,
    make_qp_op,
    make_rp_op,
    rp_matrix_formula,
)
from .dynamical import dbe_residual, make_A, make_dyn_r, shift, vertex_irf_residual
from .exact import MPoly, RatFunc, parse, substitute
from .funcfield import FieldOp, apply, compose, restrict
from .tensor import TensorMat
from .verifiers import (
    Residual,
    cybe_residual,
    hecke_residual,
    mqybe_residual,
    qybe_residual,
    unitarity_residual,
)

__version__ = "0.1.0"
