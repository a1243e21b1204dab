"""INI run-configuration parsing for the command-line front end.

Plain key=value sections via configparser.  Numeric fields accept either a
float literal or a small arithmetic expression over `pi` (e.g. ``pi/2``),
evaluated through a whitelisted AST walk; complex fields accept Python
complex literals (``2.5+2.5j``).  All validation errors carry the section
and field they refer to.
"""

import ast
import configparser
import math
from dataclasses import dataclass

from .model import CoherentPair, ModelParams, normalize_phase

__all__ = ["ConfigError", "RunConfig", "load_config", "parse_float_expr"]


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div)


def parse_float_expr(text: str) -> float:
    """Float literal or +-*/ expression over numbers and `pi`."""
    try:
        return float(text)
    except ValueError:
        pass
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"not a number: {text!r}") from exc

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
            left, right = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            return left / right
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
            value = walk(node.operand)
            return value if isinstance(node.op, ast.UAdd) else -value
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        raise ValueError(f"unsupported token in numeric expression: {text!r}")

    return walk(tree)


@dataclass(frozen=True)
class GridSpec:
    re_min: float
    re_max: float
    im_min: float
    im_max: float
    resolution: int


@dataclass(frozen=True)
class RunConfig:
    """Everything a subcommand run needs, with per-scenario sections kept
    as parsed dictionaries."""

    params: ModelParams
    initial: CoherentPair | None
    initial_style: str  # "amplitudes" | "split" | "vacuum_b" | "purify"
    purify_alpha_known: complex
    vanish_mode: str
    tail_tol: float
    time_start: float
    time_stop: float
    time_steps: int
    engine: str
    u_ab_percents: tuple[float, ...] | None
    rational_tol: float
    max_denominator: int
    purify_order: int
    grid: GridSpec | None
    husimi_source: str
    husimi_amplitude: complex
    packet_threshold: float
    decohere_series: tuple[tuple[float, float], ...]
    decohere_ut_max: float
    decohere_steps: int
    purify_count: int


class _SectionReader:
    def __init__(self, parser, section):
        self.parser = parser
        self.section = section

    def has(self, key):
        return self.parser.has_option(self.section, key)

    def raw(self, key, default=None, required=False):
        if not self.has(key):
            if required:
                raise ConfigError(f"section [{self.section}] is missing field '{key}'")
            return default
        return self.parser.get(self.section, key)

    def number(self, key, default=None, required=False):
        raw = self.raw(key, required=required)
        if raw is None:
            return default
        try:
            value = parse_float_expr(raw)
        except ValueError as exc:
            raise ConfigError(f"section [{self.section}] field '{key}': {exc}") from None
        if not math.isfinite(value):
            raise ConfigError(f"section [{self.section}] field '{key}': must be finite")
        return value

    def integer(self, key, default=None, required=False):
        value = self.number(key, default=default, required=required)
        if value is None:
            return None
        if value != int(value):
            raise ConfigError(f"section [{self.section}] field '{key}': must be an integer")
        return int(value)

    def complex_value(self, key, default=None, required=False):
        raw = self.raw(key, required=required)
        if raw is None:
            return default
        try:
            return complex(raw.replace(" ", ""))
        except ValueError:
            raise ConfigError(
                f"section [{self.section}] field '{key}': not a complex literal: {raw!r}"
            ) from None

    def choice(self, key, options, default=None):
        raw = self.raw(key, default=default)
        if raw not in options:
            raise ConfigError(
                f"section [{self.section}] field '{key}': expected one of {sorted(options)}, "
                f"got {raw!r}"
            )
        return raw


def _parse_initial(reader: _SectionReader):
    if reader.has("alpha_a"):
        alpha_a = reader.complex_value("alpha_a", required=True)
        raw_b = reader.raw("alpha_b", required=True)
        if raw_b.strip() == "purify":
            return None, "purify", alpha_a
        alpha_b = reader.complex_value("alpha_b", required=True)
        return CoherentPair(alpha_a, alpha_b), "amplitudes", alpha_a
    n_total = reader.number("n_total", required=True)
    if n_total < 0:
        raise ConfigError("section [initial] field 'n_total': must be nonnegative")
    if reader.raw("vacuum_b", "false").strip().lower() in ("true", "1", "yes"):
        pair = CoherentPair(complex(math.sqrt(n_total)), 0.0)
        return pair, "vacuum_b", pair.alpha_a
    delta_phi = reader.number("delta_phi", required=True)
    pair = CoherentPair.from_split(n_total, normalize_phase(delta_phi))
    return pair, "split", pair.alpha_a


def load_config(path: str) -> RunConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path, "r", encoding="utf-8") as handle:
            parser.read_file(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"config syntax error: {exc}") from None

    if not parser.has_section("model"):
        raise ConfigError("section [model] is required")
    model = _SectionReader(parser, "model")
    try:
        params = ModelParams(
            omega_a=model.number("omega_a", required=True),
            omega_b=model.number("omega_b", required=True),
            u_aa=model.number("u_aa", required=True),
            u_bb=model.number("u_bb", required=True),
            u_ab=model.number("u_ab", required=True),
            lam=model.number("lambda", required=True),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"section [model]: {exc}") from None

    if not parser.has_section("initial"):
        raise ConfigError("section [initial] is required")
    initial, style, alpha_known = _parse_initial(_SectionReader(parser, "initial"))
    vanish_mode = _SectionReader(parser, "initial").choice(
        "vanish_mode", {"a", "b"}, default="a")

    trunc = _SectionReader(parser, "truncation")
    tail_tol = (trunc.number("tail_tol", 1e-12)
                if parser.has_section("truncation") else 1e-12)
    if not 0.0 < tail_tol < 1.0:
        raise ConfigError("section [truncation] field 'tail_tol': must lie in (0, 1)")

    start, stop, steps = 0.0, 1.0, 1
    if parser.has_section("time"):
        time = _SectionReader(parser, "time")
        start = time.number("start", 0.0)
        stop = time.number("stop", required=True)
        steps = time.integer("steps", required=True)
    if steps < 1:
        raise ConfigError("section [time] field 'steps': must be >= 1")
    if stop < start:
        raise ConfigError("section [time]: stop must be >= start")

    engine = "auto"
    percents = None
    if parser.has_section("evolve"):
        ev = _SectionReader(parser, "evolve")
        engine = ev.choice("engine", {"auto", "analytic", "numeric"}, default="auto")
        if ev.has("u_ab_percents"):
            try:
                percents = tuple(float(tok) for tok in
                                 ev.raw("u_ab_percents").split(","))
            except ValueError:
                raise ConfigError(
                    "section [evolve] field 'u_ab_percents': comma-separated numbers"
                ) from None
            for pct in percents:
                if not 0.0 <= pct <= 100.0:
                    raise ConfigError(
                        "section [evolve] field 'u_ab_percents': percentages lie in [0, 100]"
                    )

    cat = _SectionReader(parser, "cat")
    rational_tol = cat.number("rational_tol", 1e-9) if parser.has_section("cat") else 1e-9
    max_denominator = (cat.integer("max_denominator", 64)
                       if parser.has_section("cat") else 64)
    purify_order = cat.integer("order", 0) if parser.has_section("cat") else 0
    if max_denominator < 1:
        raise ConfigError("section [cat] field 'max_denominator': must be >= 1")
    if purify_order < 0:
        raise ConfigError("section [cat] field 'order': must be >= 0")

    grid = None
    husimi_source = "purified"
    husimi_amplitude = 0j
    packet_threshold = 0.5
    if parser.has_section("husimi"):
        hs = _SectionReader(parser, "husimi")
        grid = GridSpec(
            re_min=hs.number("re_min", required=True),
            re_max=hs.number("re_max", required=True),
            im_min=hs.number("im_min", required=True),
            im_max=hs.number("im_max", required=True),
            resolution=hs.integer("resolution", required=True),
        )
        if grid.resolution < 2:
            raise ConfigError("section [husimi] field 'resolution': must be >= 2")
        if not (grid.re_max > grid.re_min and grid.im_max > grid.im_min):
            raise ConfigError("section [husimi]: window must have positive extent")
        husimi_source = hs.choice("source", {"purified", "coherent"},
                                  default="purified")
        husimi_amplitude = hs.complex_value("amplitude", default=0j)
        packet_threshold = hs.number("threshold", 0.5)
        if not 0.0 < packet_threshold < 1.0:
            raise ConfigError("section [husimi] field 'threshold': must lie in (0, 1)")

    decohere_series = ()
    decohere_ut_max = 1.0
    decohere_steps = 101
    if parser.has_section("decohere"):
        de = _SectionReader(parser, "decohere")
        raw_series = de.raw("series", required=True)
        pairs = []
        for token in raw_series.split(","):
            token = token.strip()
            if not token:
                continue
            try:
                kappa_factor, n_atoms = token.split(":")
                pairs.append((float(kappa_factor), float(n_atoms)))
            except ValueError:
                raise ConfigError(
                    "section [decohere] field 'series': expected "
                    "'kappa_factor:n_atoms' pairs"
                ) from None
        if not pairs:
            raise ConfigError("section [decohere] field 'series': empty")
        for kappa_factor, n_atoms in pairs:
            if kappa_factor < 0 or n_atoms <= 0:
                raise ConfigError(
                    "section [decohere] field 'series': kappa factors must be >= 0 "
                    "and atom numbers positive"
                )
        decohere_series = tuple(pairs)
        decohere_ut_max = de.number("ut_max", 1.0)
        decohere_steps = de.integer("steps", 101)
        if decohere_steps < 1:
            raise ConfigError("section [decohere] field 'steps': must be >= 1")
        if decohere_ut_max < 0:
            raise ConfigError("section [decohere] field 'ut_max': must be >= 0")

    purify_count = 3
    if parser.has_section("purify"):
        purify_count = _SectionReader(parser, "purify").integer("count", 3)
        if purify_count < 1:
            raise ConfigError("section [purify] field 'count': must be >= 1")

    return RunConfig(
        params=params, initial=initial, initial_style=style,
        purify_alpha_known=alpha_known, vanish_mode=vanish_mode, tail_tol=tail_tol,
        time_start=start, time_stop=stop, time_steps=steps,
        engine=engine, u_ab_percents=percents,
        rational_tol=rational_tol, max_denominator=max_denominator,
        purify_order=purify_order, grid=grid, husimi_source=husimi_source,
        husimi_amplitude=husimi_amplitude, packet_threshold=packet_threshold,
        decohere_series=decohere_series, decohere_ut_max=decohere_ut_max,
        decohere_steps=decohere_steps, purify_count=purify_count,
    )
