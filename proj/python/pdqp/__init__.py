"""Python bindings for the pdqp toolkit.

The heavy lifting lives in the C++ extension `_pdqp`; this package just
re-exports its surface.
"""

from ._pdqp import (
    ContractViolation,
    DivergedError,
    NetParams,
    ParseError,
    QpInstance,
    alignment_params,
    forward,
    full_residuals,
    generate,
    gradcheck,
    init_params,
    instance_from_json,
    load_checkpoint,
    load_instance,
    parse_qps,
    perturbation_study,
    save_checkpoint,
    solve,
    train,
    unsupervised_loss,
)

__all__ = [
    "ContractViolation",
    "DivergedError",
    "NetParams",
    "ParseError",
    "QpInstance",
    "alignment_params",
    "forward",
    "full_residuals",
    "generate",
    "gradcheck",
    "init_params",
    "instance_from_json",
    "load_checkpoint",
    "load_instance",
    "parse_qps",
    "perturbation_study",
    "save_checkpoint",
    "solve",
    "train",
    "unsupervised_loss",
]
