"""Request/response models for the HTTP service.

ScanResponse field order doubles as the frozen wire order of the scan
JSON object; clients that re-serialize must keep it.
"""

from __future__ import annotations

from pydantic import BaseModel


class HealthResponse(BaseModel):
    status: str


class EvalResponse(BaseModel):
    m: int
    n: int
    L: int
    R: int
    H: int
    D: int
    kind: str
    stagnant: bool
    trajectory: list[int] | None = None


class ScanResponse(BaseModel):
    m: int
    start: int
    end: int
    deficient: int
    perfect_count: int
    abundant: int
    stagnant: int
    perfect: list[int]
    elapsed_ms: int


class EqualityReport(BaseModel):
    t_count: int
    s_count: int
    disagreements: list[int]
    agree: bool


class SetsResponse(BaseModel):
    m: int
    limit: int
    count: int
    members: list[int] | None = None
    equality: EqualityReport | None = None


class VerifyResponse(BaseModel):
    suite: str
    lines: list[str]
    passed: bool
    strict_passed: bool
