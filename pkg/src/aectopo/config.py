"""Run configuration: TOML parsing, validation and defaults."""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .aec import CLASS_LIBRARY, STRONG_LIBRARY, ToyAEC, build_aec
from .structures import Vocabulary

COMMANDS = ("validate-aec", "build-presentation", "verify-presentation", "encode", "decode", "check-b",
            "gdelta-check", "continuity-check", "class-intersection", "metric-demo", "all")
REPORT_FORMATS = ("both", "json", "text")


class ConfigError(ValueError):
    """Invalid configuration; ``keys`` names the offending entries."""

    def __init__(self, message: str, keys: tuple[str, ...] = ()):
        super().__init__(message)
        self.keys = keys


@dataclass(frozen=True)
class Budgets:
    # presentation
    tuple_budget: int | None = None       # schema (3) lengths; default b
    search_cap: int | None = None         # solver search for clauses (1)-(2); default min(cap, 3)
    bruteforce_cap: int = 2
    literal_cap: int = 1
    # fragment generated by T*
    fragment_depth: int = 1
    fragment_width: int = 1
    fragment_count: int = 200_000
    fragment_tuple: int = 1
    fragment_term_depth: int = 1
    fragment_variables: int | None = None  # default 2b
    # logic space
    logic_block_bound: int | None = None  # block bound of the τ* used by the logic-space commands; default b
    sentence_count: int = 200_000
    roundtrip_size: int = 3
    subset_arity: int = 3
    gdelta_sentences: int = 12
    gdelta_size: int = 2
    continuity_size: int = 2
    continuity_coordinates: int = 2
    continuity_sentences: int = 24
    intersection_size: int = 2
    # metric
    metric_degree: int = 4
    metric_length: int = 4
    metric_alphabet: int = 3
    group_entry: int = 2

    def __post_init__(self):
        bad = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            if not isinstance(v, int) or isinstance(v, bool):
                bad.append(f.name)
            elif f.name in ("fragment_depth", "fragment_term_depth", "literal_cap", "bruteforce_cap"):
                if v < 0:
                    bad.append(f.name)
            elif v < 1:
                bad.append(f.name)
        if bad:
            raise ConfigError(f"budgets must be positive integers: {', '.join(bad)}", tuple(bad))


@dataclass(frozen=True)
class RunConfig:
    name: str
    vocabulary: Vocabulary
    class_name: str
    strong_name: str = "induced-substructure"
    class_params: Mapping[str, Any] = field(default_factory=dict)
    strong_params: Mapping[str, Any] = field(default_factory=dict)
    b: int = 2
    cap: int = 4
    budgets: Budgets = field(default_factory=Budgets)
    report_format: str = "both"

    def aec(self) -> ToyAEC:
        return build_aec(self.vocabulary, self.class_name, self.strong_name, self.b, self.cap,
                         dict(self.class_params), dict(self.strong_params))

    def to_dict(self) -> dict:
        return {"name": self.name, "vocabulary": self.vocabulary.to_dict(), "class": self.class_name,
                "class_params": dict(self.class_params), "strong": self.strong_name,
                "strong_params": dict(self.strong_params), "b": self.b, "cap": self.cap,
                "budgets": asdict(self.budgets), "report": {"format": self.report_format}}

    def digest(self) -> str:
        text = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()

    def with_budgets(self, overrides: Mapping[str, int]) -> RunConfig:
        unknown = sorted(set(overrides) - {f.name for f in fields(Budgets)})
        if unknown:
            raise ConfigError(f"unknown budget(s): {', '.join(unknown)}", tuple(unknown))
        return replace(self, budgets=replace(self.budgets, **overrides))


TOP_KEYS = {"name", "vocabulary", "class", "class_params", "strong", "strong_params", "b", "cap",
            "budgets", "report"}
VOCAB_KEYS = {"relations", "functions", "constants"}
REPORT_KEYS = {"format"}


def _check_keys(section: Mapping, allowed: set, where: str):
    unknown = sorted(set(section) - allowed)
    if unknown:
        label = ", ".join(f"{where}{k}" for k in unknown)
        raise ConfigError(f"unknown key(s): {label}", tuple(f"{where}{k}" for k in unknown))


def _symbols(entries, what: str, with_arity: bool):
    if not isinstance(entries, list):
        raise ConfigError(f"vocabulary.{what} must be a list", (f"vocabulary.{what}",))
    out = []
    for e in entries:
        if with_arity:
            if not (isinstance(e, list) and len(e) == 2 and isinstance(e[0], str) and isinstance(e[1], int)):
                raise ConfigError(f"vocabulary.{what} entries must be [name, arity]", (f"vocabulary.{what}",))
            out.append((e[0], e[1]))
        else:
            if not isinstance(e, str):
                raise ConfigError(f"vocabulary.{what} entries must be names", (f"vocabulary.{what}",))
            out.append(e)
    return out


def config_from_dict(data: Mapping, default_name: str = "config") -> RunConfig:
    _check_keys(data, TOP_KEYS, "")
    missing = [k for k in ("vocabulary", "class") if k not in data]
    if missing:
        raise ConfigError(f"missing key(s): {', '.join(missing)}", tuple(missing))
    vdata = data["vocabulary"]
    if not isinstance(vdata, Mapping):
        raise ConfigError("vocabulary must be a table", ("vocabulary",))
    _check_keys(vdata, VOCAB_KEYS, "vocabulary.")
    try:
        vocab = Vocabulary(tuple(_symbols(vdata.get("relations", []), "relations", True)),
                           tuple(_symbols(vdata.get("functions", []), "functions", True)),
                           tuple(_symbols(vdata.get("constants", []), "constants", False)))
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(f"vocabulary: {e}", ("vocabulary",)) from None

    bad = []
    class_name = data["class"]
    if class_name not in CLASS_LIBRARY:
        raise ConfigError(f"unknown class {class_name!r}; known: {sorted(CLASS_LIBRARY)}", ("class",))
    strong_name = data.get("strong", "induced-substructure")
    if strong_name not in STRONG_LIBRARY:
        raise ConfigError(f"unknown strong relation {strong_name!r}; known: {sorted(STRONG_LIBRARY)}",
                          ("strong",))
    b, cap = data.get("b", 2), data.get("cap", 4)
    for key, v in (("b", b), ("cap", cap)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            bad.append(key)
    if bad:
        raise ConfigError(f"must be positive integers: {', '.join(bad)}", tuple(bad))
    if cap < b:
        raise ConfigError("cap must be at least b", ("b", "cap"))
    for key in ("class_params", "strong_params"):
        if not isinstance(data.get(key, {}), Mapping):
            raise ConfigError(f"{key} must be a table", (key,))

    bdata = data.get("budgets", {})
    if not isinstance(bdata, Mapping):
        raise ConfigError("budgets must be a table", ("budgets",))
    _check_keys(bdata, {f.name for f in fields(Budgets)}, "budgets.")
    budgets = Budgets(**bdata)

    rdata = data.get("report", {})
    _check_keys(rdata, REPORT_KEYS, "report.")
    fmt = rdata.get("format", "both")
    if fmt not in REPORT_FORMATS:
        raise ConfigError(f"report.format must be one of {list(REPORT_FORMATS)}", ("report.format",))

    cfg = RunConfig(str(data.get("name", default_name)), vocab, class_name, strong_name,
                    dict(data.get("class_params", {})), dict(data.get("strong_params", {})),
                    b, cap, budgets, fmt)
    try:
        cfg.aec()
    except ValueError as e:
        raise ConfigError(str(e), ("class_params", "strong_params")) from None
    return cfg


def parse_config(path: str | Path) -> RunConfig:
    """Read and validate a TOML run configuration.

    Syntax errors carry the line and column reported by the TOML parser.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e.strerror}") from None
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"{path}: {e}") from None
    return config_from_dict(data, default_name=path.stem)


def bundled_configs() -> dict[str, Path]:
    root = Path(__file__).parent / "configs"
    return {p.stem: p for p in sorted(root.glob("*.toml"))}
