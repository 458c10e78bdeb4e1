"""Scenario configuration files (YAML validated against a JSON schema)."""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np
import yaml

from .borrowing import weight_for_strength
from .inference import TrialDesign
from .numerics import QuadratureSpec
from .oc import drift_grid
from .rmp import NormalComponent
from .scenarios import TrialSettings, make_design


class ConfigError(ValueError):
    """Schema or consistency violation in a scenario file."""


class _Loader(yaml.SafeLoader):
    pass


# YAML 1.1 only treats "1.0e-100" as a float; accept "1e-100" too.
_Loader.add_implicit_resolver(
    "tag:yaml.org,2002:float",
    re.compile(r"^[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)$"),
    list("-+0123456789."),
)


def schema() -> dict:
    return json.loads(resources.files("rmpborrow").joinpath("configs/scenario.schema.json").read_text())


def default_config_path() -> Path:
    return Path(str(resources.files("rmpborrow").joinpath("configs/illustrative.yaml")))


@dataclass(frozen=True)
class PriorBlock:
    name: str
    mu_inf: float
    n_inf: float | None = None
    sigma2_inf: float | None = None
    mu_rob: float | list | None = None
    n0: float | list | None = None
    sigma2_rob: float | list | None = None
    omega: float | None = None
    borrowing_strength: float | None = None


@dataclass(frozen=True)
class TreatmentBlock:
    mean: float | None = None
    variance: float | None = None
    follow_mu_rob: bool = True


@dataclass(frozen=True)
class SweepBlock:
    drift: list | dict
    extra_drift: list = field(default_factory=list)
    mc_drift: list = field(default_factory=lambda: [0.0, 2.0, 50.0])

    def grid(self) -> np.ndarray:
        if isinstance(self.drift, dict):
            base = drift_grid((self.drift["start"], self.drift["stop"]), self.drift["step"])
        else:
            base = np.asarray(self.drift, dtype=float)
        return np.concatenate([base, np.asarray(self.extra_drift, dtype=float)])


@dataclass(frozen=True)
class Scenario:
    name: str
    omega: float
    sigma2_rob: float
    mu_rob: float
    design: TrialDesign

    @property
    def n0(self) -> float:
        return self.design.s ** 2 / self.sigma2_rob


@dataclass(frozen=True)
class ScenarioConfig:
    trial: TrialSettings
    control_priors: tuple[PriorBlock, ...]
    sweep: SweepBlock
    treatment_prior: TreatmentBlock | None = None
    quadrature: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        t = data["trial"]
        trial = TrialSettings(n_c=t["n_c"], n_t=t["n_t"], s=float(t["s"]), eta=float(t["eta"]),
                              delta_star=float(t.get("delta_star", 0.31)))
        priors = tuple(PriorBlock(**p) for p in data["control_priors"])
        tp = data.get("treatment_prior")
        return cls(
            trial=trial,
            control_priors=priors,
            sweep=SweepBlock(**data["sweep"]),
            treatment_prior=TreatmentBlock(**tp) if tp is not None else None,
            quadrature=dict(data.get("quadrature", {})),
            output=dict(data.get("output", {})),
        )

    def to_dict(self) -> dict:
        t = self.trial
        out = {
            "trial": {"n_c": t.n_c, "n_t": t.n_t, "s": t.s, "eta": t.eta, "delta_star": t.delta_star},
            "control_priors": [
                {k: v for k, v in p.__dict__.items() if v is not None} for p in self.control_priors
            ],
            "sweep": {"drift": self.sweep.drift, "extra_drift": list(self.sweep.extra_drift),
                      "mc_drift": list(self.sweep.mc_drift)},
        }
        if self.treatment_prior is not None:
            out["treatment_prior"] = {k: v for k, v in self.treatment_prior.__dict__.items() if v is not None}
        if self.quadrature:
            out["quadrature"] = dict(self.quadrature)
        if self.output:
            out["output"] = dict(self.output)
        return out

    def quad_spec(self, abs_tol: float | None = None) -> QuadratureSpec:
        q = QuadratureSpec(order=self.quadrature.get("order", 64),
                           abs_tol=self.quadrature.get("abs_tol", 1e-8) if abs_tol is None else abs_tol)
        return q

    def scenarios(self) -> list[Scenario]:
        """Expand list-valued mu_rob / n0 / sigma2_rob entries into concrete designs."""
        out = []
        s2 = self.trial.s ** 2
        for p in self.control_priors:
            sigma2_inf = p.sigma2_inf if p.sigma2_inf is not None else s2 / p.n_inf
            locs = _as_list(p.mu_rob if p.mu_rob is not None else p.mu_inf)
            if p.n0 is not None:
                variances = [s2 / n0 for n0 in _as_list(p.n0)]
            else:
                variances = [float(v) for v in _as_list(p.sigma2_rob)]
            for mu_rob, s2_rob in itertools.product(locs, variances):
                trial = TrialSettings(self.trial.n_c, self.trial.n_t, self.trial.s, self.trial.eta,
                                      self.trial.delta_star, p.mu_inf, s2 / sigma2_inf)
                informative = NormalComponent(p.mu_inf, sigma2_inf)
                if p.omega is not None:
                    omega = float(p.omega)
                else:
                    sampling_design = make_design(0.5, max(s2_rob, sigma2_inf), mu_rob, trial, sigma2_inf=sigma2_inf)
                    omega = weight_for_strength(p.borrowing_strength, s2_rob, informative,
                                                sampling_design.control_sampling)
                treatment = self._treatment(mu_rob, s2_rob)
                try:
                    design = make_design(omega, s2_rob, mu_rob, trial, treatment, sigma2_inf=sigma2_inf)
                except ValueError as exc:
                    raise ConfigError(f"control prior {p.name!r}: {exc}") from exc
                tags = []
                if len(variances) > 1:
                    tags.append(f"n0={s2 / s2_rob:.6g}")
                if len(locs) > 1:
                    tags.append(f"mu_rob={mu_rob:g}")
                name = f"{p.name}[{';'.join(tags)}]" if tags else p.name
                out.append(Scenario(name, omega, s2_rob, float(mu_rob), design))
        return out

    def _treatment(self, mu_rob, s2_rob) -> NormalComponent | None:
        tp = self.treatment_prior
        if tp is None:
            return None
        mean = tp.mean if tp.mean is not None else (mu_rob if tp.follow_mu_rob else 0.0)
        variance = tp.variance if tp.variance is not None else s2_rob
        return NormalComponent(mean, variance)


def _as_list(v) -> list[float]:
    return [float(x) for x in v] if isinstance(v, list) else [float(v)]


def _node_line(root, path) -> int | None:
    """1-based line of the YAML node addressed by a jsonschema error path."""
    node = root
    for key in path:
        if isinstance(node, yaml.MappingNode):
            nxt = None
            for k, v in node.value:
                if k.value == key:
                    nxt = v
                    break
            if nxt is None:
                break
            node = nxt
        elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
            node = node.value[key]
        else:
            break
    return node.start_mark.line + 1 if node is not None else None


def parse_config(text: str, source: str = "<config>") -> ScenarioConfig:
    try:
        root = yaml.compose(text, Loader=_Loader)
        data = yaml.load(text, Loader=_Loader)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{source}: YAML syntax error: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: top level must be a mapping")
    validator = jsonschema.Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        lines = []
        for err in errors:
            line = _node_line(root, list(err.absolute_path))
            where = "/".join(str(p) for p in err.absolute_path) or "<root>"
            lines.append(f"{source}:{line}: {where}: {err.message}")
        raise ConfigError("\n".join(lines))
    cfg = ScenarioConfig.from_dict(data)
    cfg.scenarios()  # surface consistency errors (e.g. robust variance too small) at load time
    return cfg


def load_config(path: str | Path | None = None) -> ScenarioConfig:
    path = default_config_path() if path is None else Path(path)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, str(path))


def dump_config(cfg: ScenarioConfig) -> str:
    return yaml.safe_dump(cfg.to_dict(), sort_keys=False)
