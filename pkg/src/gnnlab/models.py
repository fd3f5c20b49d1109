"""Pydantic schemas: graph documents, model and training configs, API bodies."""

from __future__ import annotations

from enum import Enum

from pydantic import BaseModel, Field, field_validator, model_validator


class TestName(str, Enum):
    VERTEX_WL = "vertex"
    WL2 = "wl2"
    WL3 = "wl3"
    FWL2 = "fwl2"
    FWL3 = "fwl3"

    __test__ = False  # not a pytest class


class ModelFamily(str, Enum):
    MGNN = "mgnn"
    LGNN2 = "lgnn2"
    FGNN2 = "fgnn2"


class Variant(str, Enum):
    INVARIANT = "invariant"
    EQUIVARIANT = "equivariant"


class GraphKind(str, Enum):
    ERDOS_RENYI = "erdos_renyi"
    REGULAR = "regular"


class GraphDocument(BaseModel):
    """On-disk graph format: 0-based unordered edge list plus optional node features."""

    n: int = Field(..., ge=1)
    edges: list[tuple[int, int]] = Field(default_factory=list)
    features: list[list[float]] | None = None


class MLPSpec(BaseModel):
    """Layer widths input -> hidden... -> output. ReLU on hidden layers, identity on output."""

    widths: list[int] = Field(..., min_length=2)

    @field_validator("widths")
    @classmethod
    def _positive(cls, v: list[int]) -> list[int]:
        if any(w <= 0 for w in v):
            raise ValueError("MLP widths must be positive")
        return v

    @property
    def fan_in(self) -> int:
        return self.widths[0]

    @property
    def fan_out(self) -> int:
        return self.widths[-1]

    @classmethod
    def build(cls, fan_in: int, hidden: int, fan_out: int, depth: int) -> MLPSpec:
        """An MLP with `depth` affine maps (depth - 1 hidden layers of width `hidden`)."""
        return cls(widths=[fan_in] + [hidden] * (depth - 1) + [fan_out])


class ModelSpec(BaseModel):
    family: ModelFamily
    variant: Variant
    in_channels: int = Field(1, ge=1, description="Graph channels e+1 (features + adjacency)")
    layer_widths: list[int] = Field(default_factory=lambda: [16, 16])
    mlp_hidden: int = Field(16, ge=1)
    mlp_depth: int = Field(2, ge=1)
    out_width: int = Field(8, ge=1)
    head: str = Field("affine", pattern="^(affine|convex)$")

    @field_validator("layer_widths")
    @classmethod
    def _widths(cls, v: list[int]) -> list[int]:
        if not v or any(w <= 0 for w in v):
            raise ValueError("layer_widths must be a non-empty list of positive widths")
        return v

    @property
    def num_layers(self) -> int:
        return len(self.layer_widths)

    @property
    def input_width(self) -> int:
        """Width of the tensor fed to the first layer."""
        if self.family == ModelFamily.MGNN:
            # node features plus a constant channel
            return self.in_channels
        # i2 initialization appends the delta channel
        return self.in_channels + 1

    def widths_chain(self) -> list[int]:
        return [self.input_width, *self.layer_widths]

    def _mlp(self, fan_in: int, fan_out: int) -> MLPSpec:
        return MLPSpec.build(fan_in, self.mlp_hidden, fan_out, self.mlp_depth)

    def mlp_specs(self) -> dict[str, MLPSpec]:
        """Every learnable map, keyed by parameter prefix."""
        specs: dict[str, MLPSpec] = {}
        chain = self.widths_chain()
        for t, (d_in, d_out) in enumerate(zip(chain[:-1], chain[1:])):
            if self.family == ModelFamily.MGNN:
                specs[f"layer{t}.f1"] = self._mlp(2 * d_in, d_out)
                specs[f"layer{t}.f0"] = self._mlp(d_in + d_out, d_out)
            elif self.family == ModelFamily.LGNN2:
                specs[f"layer{t}.f"] = self._mlp(d_out, d_out)
            else:
                specs[f"layer{t}.f1"] = self._mlp(d_in, d_out)
                specs[f"layer{t}.f2"] = self._mlp(d_in, d_out)
                specs[f"layer{t}.f0"] = self._mlp(d_in + d_out, d_out)
        head = "m_I" if self.variant == Variant.INVARIANT else "m_E"
        specs[head] = self._mlp(chain[-1], self.out_width)
        return specs


class TrainConfig(BaseModel):
    """QAP benchmark configuration. Defaults are the desk-scale setting."""

    graph_kind: GraphKind = GraphKind.ERDOS_RENYI
    n_min: int = Field(15, ge=2)
    n_max: int = Field(15, ge=2)
    pe: float = Field(0.2, ge=0.0, lt=1.0)
    degree: int = Field(6, ge=0)
    train_noise: float = Field(0.0, ge=0.0)
    eval_noise_levels: list[float] = Field(default_factory=lambda: [0.0, 0.01, 0.02, 0.03, 0.05])
    n_train: int = Field(2000, ge=1)
    n_val: int = Field(200, ge=1)
    n_test: int = Field(200, ge=1)
    model: ModelSpec = Field(
        default_factory=lambda: ModelSpec(
            family=ModelFamily.FGNN2,
            variant=Variant.EQUIVARIANT,
            layer_widths=[32, 32],
            mlp_hidden=32,
            mlp_depth=2,
            out_width=32,
        )
    )
    epochs: int = Field(15, ge=1)
    batch_size: int = Field(32, ge=1)
    lr: float = Field(1e-3, gt=0.0)
    identity_order: bool = False
    seed: int = Field(0, ge=0)

    @model_validator(mode="after")
    def _consistent(self) -> TrainConfig:
        if self.n_min > self.n_max:
            raise ValueError("n_min must not exceed n_max")
        if self.model.variant != Variant.EQUIVARIANT:
            raise ValueError("QAP training needs an equivariant model")
        if self.graph_kind == GraphKind.REGULAR:
            if self.degree >= self.n_min:
                raise ValueError("degree must be smaller than n_min")
            if any((n * self.degree) % 2 for n in range(self.n_min, self.n_max + 1)):
                raise ValueError("n * degree must be even for every allowed n")
        for level in [self.train_noise, *self.eval_noise_levels]:
            for n in {self.n_min, self.n_max}:
                pe = self.edge_density(n)
                if level < 0 or level > 1 or (pe < 1 and level * pe / (1 - pe) > 1):
                    raise ValueError(f"noise level {level} admits no valid p2")
        return self

    def edge_density(self, n: int) -> float:
        if self.graph_kind == GraphKind.REGULAR:
            return self.degree / (n - 1)
        return self.pe

    @classmethod
    def full_scale(cls, **overrides) -> TrainConfig:
        """The published setting: n=50, 20000/1000/1000 graphs, width 64, depth-3 MLPs."""
        base = dict(
            n_min=50,
            n_max=50,
            n_train=20000,
            n_val=1000,
            n_test=1000,
            epochs=25,
            batch_size=32,
            lr=1e-4,
            degree=10,
            model=ModelSpec(
                family=ModelFamily.FGNN2,
                variant=Variant.EQUIVARIANT,
                layer_widths=[64, 64],
                mlp_hidden=64,
                mlp_depth=3,
                out_width=64,
            ),
        )
        base.update(overrides)
        return cls(**base)


class CorpusSpec(BaseModel):
    hard_pairs: list[str] = Field(default_factory=lambda: ["c6_vs_2c3", "rook_vs_shrikhande"])
    er_pairs: int = Field(50, ge=0)
    er_n_min: int = Field(4, ge=2)
    er_n_max: int = Field(10, ge=2)
    er_p: float = Field(0.3, ge=0.0, le=1.0)
    regular_pairs: int = Field(20, ge=0)
    regular_n: int = Field(10, ge=2)
    regular_d: int = Field(3, ge=0)
    controls_per_family: int = Field(2, ge=1)
    seed: int = Field(0, ge=0)


# --- HTTP bodies -------------------------------------------------------------


class DistinguishRequest(BaseModel):
    test: TestName
    a: GraphDocument
    b: GraphDocument


class DistinguishResponse(BaseModel):
    test: TestName
    separated: bool
    rounds_a: int
    rounds_b: int
    signature_a: str
    signature_b: str


class AssignRequest(BaseModel):
    scores: list[list[float]] = Field(..., min_length=1)


class AssignResponse(BaseModel):
    assignment: list[int]
    objective: float


class HealthResponse(BaseModel):
    status: str = "healthy"
    version: str
    tests_available: list[str]


class StatsResponse(BaseModel):
    total_runs: int
    runs_by_command: dict[str, int]
    total_violations: int
