"""Secure bivariate polynomial codes for straggler-tolerant private matrix products."""

from sbpcodes.field import MERSENNE_31, FieldElement, PrimeField
from sbpcodes.kernels import BACKEND
from sbpcodes.matrix import BlockMatrix, PartitionSpec
from sbpcodes.sbp import (
    SbpParams,
    sbp_decode,
    sbp_draw_masks,
    sbp_encode,
    sbp_keygen,
    sbp_recovery_threshold,
    sbp_worker_compute,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "MERSENNE_31",
    "BlockMatrix",
    "FieldElement",
    "PartitionSpec",
    "PrimeField",
    "SbpParams",
    "sbp_decode",
    "sbp_draw_masks",
    "sbp_encode",
    "sbp_keygen",
    "sbp_recovery_threshold",
    "sbp_worker_compute",
]
