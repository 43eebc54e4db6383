"""Setup files: plain key = value text, one setting per line.

Required keys: dimension, multiplicities (comma list, one per coordinate).
Optional grid keys override the dimension defaults: radius, inner_radius,
dyadic_levels, jacobi_points, dyadic_points, outer_panels, outer_points.
`label` names the setup in reports.  Lines starting with # are comments.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

from .grids import Grid, GridSpec
from .rootsys import ReflectionSetup

_GRID_INT_KEYS = {"dyadic_levels", "jacobi_points", "dyadic_points",
                  "outer_panels", "outer_points"}
_GRID_FLOAT_KEYS = {"radius", "inner_radius"}


@dataclass
class LoadedSetup:
    label: str
    setup: ReflectionSetup
    spec: GridSpec
    source: str

    _grid: Grid | None = None

    def grid(self) -> Grid:
        if self._grid is None:
            self._grid = Grid(self.setup, self.spec)
        return self._grid


def parse_setup_text(text: str, source: str = "<string>") -> LoadedSetup:
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{source}:{lineno}: expected 'key = value'")
        key, val = (part.strip() for part in line.split("=", 1))
        entries[key.lower()] = val
    if "dimension" not in entries or "multiplicities" not in entries:
        raise ValueError(f"{source}: dimension and multiplicities are required")
    dim = int(entries.pop("dimension"))
    mults = tuple(float(v) for v in entries.pop("multiplicities").split(","))
    setup = ReflectionSetup(dim, mults)
    spec = GridSpec.default_for(dim)
    overrides = {}
    for key in list(entries):
        if key in _GRID_INT_KEYS:
            overrides[key] = int(entries.pop(key))
        elif key in _GRID_FLOAT_KEYS:
            overrides[key] = float(entries.pop(key))
    if overrides:
        spec = replace(spec, **overrides)
    label = entries.pop("label", Path(source).stem)
    if entries:
        raise ValueError(f"{source}: unknown keys {sorted(entries)}")
    return LoadedSetup(label=label, setup=setup, spec=spec, source=source)


def load_setup(path) -> LoadedSetup:
    path = Path(path)
    return parse_setup_text(path.read_text(), source=str(path))
