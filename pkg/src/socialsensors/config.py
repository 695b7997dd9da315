"""Benchmark scenario configuration (INI files with sections)."""

from __future__ import annotations

import configparser
import io
import os
from dataclasses import asdict, dataclass, field, fields, replace

from .epidemic import CLAMP_MODES
from .errors import FormatError, InvalidParameterError

GRAPH_SOURCES = ("er", "chung_lu", "edge_list")
PEAK_SERIES = ("prevalence", "incidence")


@dataclass(frozen=True)
class GraphSource:
    """Where a scenario's graph comes from.

    ``er`` uses ``n`` and ``p``; ``chung_lu`` uses ``weights_file`` or else
    power-law weights from ``n``, ``m`` and ``exponent``; ``edge_list`` reads
    ``path``.  Generated graphs are redrawn for every replication.
    """

    source: str = "er"
    n: int = 1000
    p: float = 0.005
    m: float = 2500.0
    exponent: float = 2.5
    weights_file: str = ""
    path: str = ""
    lcc: bool = True


@dataclass(frozen=True)
class ScenarioConfig:
    graph: GraphSource = field(default_factory=GraphSource)
    beta: float = 0.001
    gamma: float = 0.001
    clamp_mode: str = "linear"
    initial_infected: int = 10
    T: int = 3000
    fos_sample_size: int = 20
    smoothing_window: int = 1
    peak_series: str = "prevalence"
    extinction_threshold: float = 0.05
    forecast: bool = True
    forecast_lag: int = 100
    forecast_horizon: int = 500
    replications: int = 1
    master_seed: int = 0
    workers: int = 1
    output_dir: str = "out"

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        g = self.graph
        if g.source not in GRAPH_SOURCES:
            raise InvalidParameterError(f"graph source must be one of {GRAPH_SOURCES}, got {g.source!r}")
        if g.source == "er" and (g.n < 1 or not 0 <= g.p <= 1):
            raise InvalidParameterError("er graph needs n >= 1 and 0 <= p <= 1")
        if g.source == "chung_lu" and not g.weights_file and (g.n < 2 or g.m <= 0 or g.exponent <= 2):
            raise InvalidParameterError("chung_lu graph needs n >= 2, m > 0 and exponent > 2")
        if g.source == "edge_list" and not g.path:
            raise InvalidParameterError("edge_list graph needs a path")
        if self.beta < 0 or not 0 <= self.gamma <= 1:
            raise InvalidParameterError("need beta >= 0 and 0 <= gamma <= 1")
        if self.clamp_mode not in CLAMP_MODES:
            raise InvalidParameterError(f"clamp_mode must be one of {CLAMP_MODES}")
        if self.initial_infected < 1 or self.fos_sample_size < 1 or self.T < 1:
            raise InvalidParameterError("initial_infected, fos_sample_size and T must be >= 1")
        if self.smoothing_window < 1:
            raise InvalidParameterError("smoothing_window must be >= 1")
        if self.peak_series not in PEAK_SERIES:
            raise InvalidParameterError(f"peak_series must be one of {PEAK_SERIES}")
        if not 0 <= self.extinction_threshold <= 1:
            raise InvalidParameterError("extinction_threshold must lie in [0, 1]")
        if self.forecast_lag < 0 or self.forecast_horizon < 0:
            raise InvalidParameterError("forecast lag and horizon must be >= 0")
        if self.replications < 1:
            raise InvalidParameterError(f"replications must be >= 1, got {self.replications}")
        if self.master_seed is None or self.master_seed < 0:
            raise InvalidParameterError("master_seed is required and must be >= 0")
        if self.workers < 1:
            raise InvalidParameterError("workers must be >= 1")

    # serialization ----------------------------------------------------------

    def to_ini(self) -> str:
        cp = _parser()
        for section, names in _SECTIONS.items():
            cp[section] = {}
            for name in names:
                value = getattr(self.graph, name) if section == "graph" else getattr(self, name)
                cp[section][name] = _format(value)
        buf = io.StringIO()
        cp.write(buf)
        return buf.getvalue()

    @classmethod
    def from_ini(cls, text: str, base_dir: str | os.PathLike | None = None) -> "ScenarioConfig":
        cp = _parser()
        try:
            cp.read_string(text)
        except configparser.Error as exc:
            raise FormatError(f"cannot parse config: {exc}") from None
        values = {f"{s}.{k}": v for s in cp.sections() for k, v in cp[s].items()}
        if "run.master_seed" not in values:
            raise FormatError("config must set run.master_seed")
        return cls.from_mapping(values, base_dir=base_dir)

    @classmethod
    def load(cls, path: str | os.PathLike) -> "ScenarioConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_ini(fh.read(), base_dir=os.path.dirname(os.path.abspath(path)))

    @classmethod
    def from_mapping(cls, values: dict[str, str], base: "ScenarioConfig | None" = None, base_dir=None) -> "ScenarioConfig":
        """Apply ``{"section.key": "text"}`` overrides on top of ``base`` (defaults if omitted)."""
        base = base or cls()
        graph_kw, top_kw = {}, {}
        for dotted, raw in values.items():
            section, _, key = dotted.partition(".")
            if section not in _SECTIONS or key not in _SECTIONS[section]:
                raise FormatError(f"unknown config key {dotted!r}")
            target = graph_kw if section == "graph" else top_kw
            target[key] = _parse(raw, _TYPES[key], dotted)
        graph = replace(base.graph, **graph_kw)
        if base_dir is not None:
            for key in ("path", "weights_file"):
                value = getattr(graph, key)
                if value and not os.path.isabs(value):
                    graph = replace(graph, **{key: os.path.normpath(os.path.join(base_dir, value))})
        kw = {f.name: getattr(base, f.name) for f in fields(cls) if f.name != "graph"}
        kw.update(top_kw)
        return cls(graph=graph, **kw)

    def to_dict(self) -> dict:
        return asdict(self)


_SECTIONS = {
    "graph": [f.name for f in fields(GraphSource)],
    "epidemic": ["beta", "gamma", "clamp_mode", "initial_infected", "T"],
    "sensors": ["fos_sample_size"],
    "analysis": [
        "smoothing_window",
        "peak_series",
        "extinction_threshold",
        "forecast",
        "forecast_lag",
        "forecast_horizon",
    ],
    "run": ["replications", "master_seed", "workers", "output_dir"],
}

_TYPES = {f.name: f.type for f in fields(GraphSource)}
_TYPES.update({f.name: f.type for f in fields(ScenarioConfig) if f.name != "graph"})


def _parser() -> configparser.ConfigParser:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # keys are case-sensitive (``T``)
    return cp


def _format(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse(raw: str, kind: str, key: str):
    raw = raw.strip()
    try:
        if kind == "bool":
            lowered = raw.lower()
            if lowered in ("1", "true", "yes", "on"):
                return True
            if lowered in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
    except ValueError:
        raise FormatError(f"config key {key!r}: cannot read {raw!r} as {kind}") from None
    return raw
