"""Typed domain errors shared by the library and mapped to CLI exit codes.

Every error carries a machine-readable ``kind`` so the CLI can serialize
``{"error": {"kind": ..., "detail": ...}}`` without guessing from messages.
"""


class DomainError(Exception):
    """A violated mathematical precondition (CLI exit code 1)."""

    kind = "precondition"

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class ReducibleError(DomainError):
    kind = "reducible"


class SizeError(DomainError):
    kind = "size"


class DegenerateHullError(DomainError):
    """Hull is not full-dimensional; carries the affine hull's dimension."""

    kind = "degenerate_hull"

    def __init__(self, detail: str, affine_dim: int):
        super().__init__(detail)
        self.affine_dim = affine_dim


class NotInLatticeError(DomainError):
    """Operator cannot be reduced to the free-module basis: some term has
    theta-degree >= n but z-degree too low to host the z^n theta^n rewrite."""

    kind = "not_in_lattice"


class BlockShapeError(DomainError):
    """Matrix does not have the two-block shape produced for a classical
    hypergeometric parameter pair."""

    kind = "block_shape"


class ParseError(Exception):
    """Malformed user input (CLI exit code 2)."""

    kind = "parse"

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail
