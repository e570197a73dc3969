"""Run configuration: data location, level list, sieve prime sets, search
box, output path. Parsed from a small TOML-style key/value file."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .rings import is_prime

__all__ = ["RunConfig", "ConfigError", "parse_simple_toml"]

DEFAULT_STAGE3_PRIMES = {7: (29, 43), 11: (23, 89), 13: (53, 79, 157)}
DEFAULT_LEVELS = (70, 350, 8960, 44800)


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    data_dir: Path | None = None
    levels: tuple[int, ...] = DEFAULT_LEVELS
    stage2_primes: tuple[int, ...] = field(
        default_factory=lambda: tuple(p for p in range(11, 98) if is_prime(p))
    )
    stage3_primes: dict = field(default_factory=lambda: dict(DEFAULT_STAGE3_PRIMES))
    box_x: int = 200
    box_d: int = 200
    nmax: int = 13
    out: Path | None = None

    def __post_init__(self):
        self.levels = tuple(int(x) for x in self.levels)
        self.stage2_primes = tuple(int(p) for p in self.stage2_primes)
        self.stage3_primes = {
            int(n): tuple(int(p) for p in ps) for n, ps in self.stage3_primes.items()
        }
        for p in self.stage2_primes:
            if not is_prime(p):
                raise ConfigError(f"stage-2 entry {p} is not prime")
        for n, ps in self.stage3_primes.items():
            if not is_prime(n) or n < 7:
                raise ConfigError(f"stage-3 exponent {n} must be a prime >= 7")
            for p in ps:
                if not is_prime(p):
                    raise ConfigError(f"stage-3 entry {p} is not prime")
                if p % n != 1:
                    raise ConfigError(f"stage-3 prime {p} is not 1 mod {n}")
                if p % 2 == 0 or 70 % p == 0:
                    raise ConfigError(f"stage-3 prime {p} divides 70")
        if self.box_x < 1 or self.box_d < 1 or self.nmax < 2:
            raise ConfigError("search box bounds must be >= 1 and nmax >= 2")

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        data = parse_simple_toml(text)
        kwargs = {}
        if "data_dir" in data:
            kwargs["data_dir"] = Path(data.pop("data_dir"))
        if "out" in data:
            kwargs["out"] = Path(data.pop("out"))
        if "levels" in data:
            kwargs["levels"] = data.pop("levels")
        if "stage2_primes" in data:
            kwargs["stage2_primes"] = data.pop("stage2_primes")
        stage3 = data.pop("stage3", None)
        if stage3 is not None:
            if not isinstance(stage3, dict):
                raise ConfigError("[stage3] must be a section of n = [p, ...] lines")
            kwargs["stage3_primes"] = {int(k): v for k, v in stage3.items()}
        search = data.pop("search", {})
        for k in ("box_x", "box_d", "nmax"):
            if k in search:
                kwargs[k] = int(search[k])
            elif k in data:
                kwargs[k] = int(data.pop(k))
        unknown = [k for k in data if not isinstance(data[k], dict)]
        if unknown:
            raise ConfigError(f"unknown config keys: {unknown}")
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    def to_dict(self) -> dict:
        return {
            "data_dir": str(self.data_dir) if self.data_dir else None,
            "levels": list(self.levels),
            "stage2_primes": list(self.stage2_primes),
            "stage3_primes": {str(n): list(ps) for n, ps in sorted(self.stage3_primes.items())},
            "search": {"box_x": self.box_x, "box_d": self.box_d, "nmax": self.nmax},
        }


def parse_simple_toml(text: str) -> dict:
    """Parse the TOML-style subset used for run configs: [sections], and
    key = value lines with string, integer, boolean or flat list values."""
    root: dict = {}
    current = root
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if not name:
                raise ConfigError(f"line {lineno}: empty section name")
            current = root.setdefault(name, {})
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key = key.strip().strip('"').strip("'")
        current[key] = _parse_value(value.strip(), lineno)
    return root


def _strip_comment(line: str) -> str:
    out = []
    in_str: str | None = None
    for ch in line:
        if in_str:
            out.append(ch)
            if ch == in_str:
                in_str = None
        elif ch in "\"'":
            in_str = ch
            out.append(ch)
        elif ch == "#":
            break
        else:
            out.append(ch)
    return "".join(out)


def _parse_value(value: str, lineno: int):
    if not value:
        raise ConfigError(f"line {lineno}: missing value")
    if value.startswith("[") and value.endswith("]"):
        inner = value[1:-1].strip()
        if not inner:
            return []
        return [_parse_value(v.strip(), lineno) for v in inner.split(",")]
    if value[0] in "\"'" and value[-1] == value[0] and len(value) >= 2:
        return value[1:-1]
    if value in ("true", "false"):
        return value == "true"
    try:
        return int(value)
    except ValueError:
        pass
    try:
        return float(value)
    except ValueError:
        return value
