"""
Pydantic models for garage specs, surface reports and dynamics results
"""
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator

from exact_core import Angle

Point = Tuple[float, float]


class FamilyDescriptor(BaseModel):
    name: str = Field(..., description="Catalog family name")
    n: int = Field(..., description="Integer family parameter")
    stage: Optional[str] = Field(None, description="Construction stage (ward-stage only)")

    def __str__(self) -> str:
        parts = [self.name, str(self.n)] + ([self.stage] if self.stage else [])
        return " ".join(parts)


class TileSpec(BaseModel):
    label: str
    word: List[int] = Field(default_factory=list, description="Base-edge reflection word")


class GluingSpec(BaseModel):
    tile_a: str
    edge_a: int = Field(..., ge=0)
    tile_b: str
    edge_b: int = Field(..., ge=0)


class GarageSpec(BaseModel):
    """File-level description: a family descriptor or an explicit complex"""
    name: Optional[str] = None
    family: Optional[FamilyDescriptor] = None
    vertices: List[Point] = Field(default_factory=list)
    angles: List[Optional[Angle]] = Field(default_factory=list)
    tiles: List[TileSpec] = Field(default_factory=list)
    gluings: List[GluingSpec] = Field(default_factory=list)

    @property
    def is_family(self) -> bool:
        return self.family is not None and not self.vertices


class Singularity(BaseModel):
    vertex_class: int
    cone_multiple: int = Field(..., description="Cone angle divided by 2*pi")

    @property
    def multiplicity(self) -> int:
        return self.cone_multiple

    @field_validator("cone_multiple")
    @classmethod
    def validate_multiple(cls, v):
        if v < 2:
            raise ValueError("a singularity has cone angle at least 4*pi")
        return v


class SurfaceReport(BaseModel):
    name: str
    faces: int
    edges: int
    vertices: int
    euler_characteristic: int
    genus: int
    area: float
    group: str
    singularities: List[Singularity]
    marked_points: List[int]
    cone_multiples: List[int]


class TerminationReason(str, Enum):
    BUDGET_EXHAUSTED = "budget-exhausted"
    CLOSED = "closed"
    SADDLE_HIT = "saddle-hit"


class TrajectorySegment(BaseModel):
    face: int = Field(..., description="Face id (tile id for billiard traces)")
    entry: Point
    exit: Point
    element: Optional[str] = Field(None, description="Unfolding copy of a billiard segment")


class Trajectory(BaseModel):
    start_face: int
    start: Point
    direction: Point
    segments: List[TrajectorySegment]
    total_length: float
    termination: TerminationReason
    hit_class: Optional[int] = None
    bounces: int = 0

    class Config:
        use_enum_values = True


class SaddleConnection(BaseModel):
    start_class: int
    end_class: int
    holonomy: Point
    length: float


class HolonomyVector(BaseModel):
    dx: float
    dy: float
    multiplicity: int = Field(1, ge=1)

    @property
    def length(self) -> float:
        return (self.dx ** 2 + self.dy ** 2) ** 0.5


class Cylinder(BaseModel):
    direction: Point
    circumference: float = Field(..., gt=0)
    height: float = Field(..., gt=0)
    bottom_boundary: List[SaddleConnection] = Field(default_factory=list)
    top_boundary: List[SaddleConnection] = Field(default_factory=list)

    @property
    def area(self) -> float:
        return self.circumference * self.height

    @property
    def modulus(self) -> float:
        return self.height / self.circumference


class DirectionVerdict(str, Enum):
    PERIODIC = "periodic-evidence"
    MINIMAL = "minimal-evidence"
    INCONCLUSIVE = "inconclusive"


class DiscrepancySample(BaseModel):
    crossings: int
    discrepancy: float


class DirectionReport(BaseModel):
    direction: Point
    verdict: DirectionVerdict
    cylinders: List[Cylinder] = Field(default_factory=list)
    discrepancy: List[DiscrepancySample] = Field(default_factory=list)
    area_error: Optional[float] = None
    note: str = ""

    class Config:
        use_enum_values = True


class FiberEntry(BaseModel):
    q_vertex: int = Field(..., description="Boundary or interior vertex class of Q")
    angle: Angle
    k: int
    ramification: int = Field(..., description="k / gcd(k, n); 1 means unramified")
    points: int = Field(..., description="Points of M_Q coming from this vertex")
    interior: bool = False


class Fiber(BaseModel):
    base_vertex: int
    base_class: str
    base_angle: Angle
    entries: List[FiberEntry]
    branched: bool


class Preimage(BaseModel):
    q_point: int
    ramification: int


class BranchPoint(BaseModel):
    p_point: int
    base_vertex: int
    base_class: str
    cone_multiple: int
    preimages: List[Preimage]
    branched: bool
    fixed_by_stabilizer: Optional[bool] = None


class CoverReport(BaseModel):
    degree: int
    index: int
    tile_count: int
    fibers: List[Fiber]
    branch_set: List[str]
    point_fibers: List[BranchPoint]
    euler_p: int
    euler_q: int
    ramification_total: int
    rh_consistent: bool
    paths_agree: bool = Field(..., description="Arithmetic and cone-angle branching tests agree")


class CheckResult(BaseModel):
    name: str
    passed: bool
    evidence: str


class SuitabilityVerdict(BaseModel):
    checks: List[CheckResult]
    overall: str
    reason: Optional[str] = None
    note: str = ""

    @property
    def suitable(self) -> bool:
        return self.overall == "suitable-candidate"


class HeightSplitReport(BaseModel):
    label: str = "HEURISTIC"
    direction: Point
    circumference: float
    cylinder_height: float
    point_height: float
    ratio: float
    partial_quotients: List[int]
    convergent: Optional[Tuple[int, int]] = None
    verdict: str


class GrowthRow(BaseModel):
    T: float
    N: int


class GrowthReport(BaseModel):
    method: str
    rows: List[GrowthRow]
    slope: float
    intercept: float


class ClaimResult(BaseModel):
    name: str
    expected: str
    observed: str
    passed: bool


class ReproReport(BaseModel):
    script: str
    n: int
    claims: List[ClaimResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    @property
    def failed_claims(self) -> List[ClaimResult]:
        return [c for c in self.claims if not c.passed]
