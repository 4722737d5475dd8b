from enum import Enum
from math import gcd
from typing import Annotated, Any, List, Tuple, Union

from pydantic import AfterValidator, BaseModel, BeforeValidator, ConfigDict

from app.core.exceptions import DomainError
from app.models.matrix import format_rational


class ReportFormat(str, Enum):
    TEXT = "text"
    JSON = "json"


class AssertionStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    ASSUMED = "assumed"


def _canonical_rational(value: Any) -> str:
    if isinstance(value, float):
        raise ValueError(f"floating-point value {value!r} is not exact; write it as a rational string")
    try:
        return format_rational(value)
    except DomainError as exc:
        raise ValueError(exc.message) from exc


# Exact rational on the wire: bare integers or strings like "8/9", stored canonically
RationalStr = Annotated[str, BeforeValidator(_canonical_rational)]
RationalRows = List[List[RationalStr]]
JSONValue = Union[int, str, bool, None, List[Any]]


def _cyclic_type(value: Tuple[int, int]) -> Tuple[int, int]:
    n, a = value
    if n < 2 or not 1 <= a < n or gcd(n, a) != 1:
        raise ValueError(f"invalid cyclic quotient type 1/{n}(1,{a})")
    return value


# Isotropy type 1/n(1,a) with n >= 2, 1 <= a < n, gcd(n, a) = 1
QuotientType = Annotated[Tuple[int, int], AfterValidator(_cyclic_type)]


class BaseSchema(BaseModel):
    model_config = ConfigDict(from_attributes=True, use_enum_values=True, extra="forbid")
