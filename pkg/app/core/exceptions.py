"""
Centralized exception handling for the workbench
"""
from typing import Any, Dict, Optional
from fastapi import status


class WorkbenchError(Exception):
    """Base workbench exception class"""
    def __init__(
        self,
        message: str,
        status_code: int = status.HTTP_400_BAD_REQUEST,
        details: Optional[Dict[str, Any]] = None
    ):
        self.message = message
        self.status_code = status_code
        self.details = details or {}
        super().__init__(self.message)


class DomainError(WorkbenchError):
    """Input outside the domain of an operation"""
    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(
            message=message,
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            details=details
        )


class LatticeMismatchError(WorkbenchError):
    """Classes living on different lattices were combined"""
    def __init__(self, left: str, right: str):
        super().__init__(
            message=f"Lattice mismatch: {left} vs {right}",
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            details={"left": left, "right": right}
        )


class DegenerateGramError(WorkbenchError):
    """A Gram matrix that had to be inverted is singular"""
    def __init__(self, lattice: str, message: Optional[str] = None):
        super().__init__(
            message=message or f"Gram matrix of {lattice} is degenerate",
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            details={"lattice": lattice}
        )


class DuplicateLabelError(WorkbenchError):
    """A curve label is already registered on a lattice"""
    def __init__(self, label: str, lattice: str):
        super().__init__(
            message=f"Label {label} already exists on {lattice}",
            status_code=status.HTTP_409_CONFLICT,
            details={"label": label, "lattice": lattice}
        )


class UnknownLabelError(WorkbenchError):
    """Label not found"""
    def __init__(self, label: str, where: Any = None):
        message = f"Unknown label {label}"
        if where:
            message += f" on {where}"
        super().__init__(
            message=message,
            status_code=status.HTTP_404_NOT_FOUND,
            details={"label": label}
        )


class DivisibilityError(WorkbenchError):
    """Quotient pairing residue not divisible by the group order"""
    def __init__(self, pair: tuple, residue: Any, order: int):
        super().__init__(
            message=f"Pairing residue {residue} of pair ({pair[0]},{pair[1]}) is not divisible by {order}",
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            details={"pair": list(pair), "residue": str(residue), "order": order}
        )


class InvolutionError(WorkbenchError):
    """Involution data inconsistent with the lattice"""
    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(
            message=message,
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            details=details
        )


class ScenarioValidationError(WorkbenchError):
    """Scenario failed to load or validate"""
    def __init__(self, entry: str, message: str):
        super().__init__(
            message=f"Invalid scenario entry {entry}: {message}",
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            details={"entry": entry}
        )


class ReportFormatError(WorkbenchError):
    """Unknown report rendering format"""
    def __init__(self, fmt: str):
        super().__init__(
            message=f"Unknown report format: {fmt}",
            status_code=status.HTTP_400_BAD_REQUEST,
            details={"format": fmt}
        )
