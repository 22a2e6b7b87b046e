"""Feasibility sweeps over shape and line-configuration parameters."""

from __future__ import annotations

import ast
import csv
import io
import itertools
import math
import operator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import TrifitError
from .geom import validate_config, validate_shape
from .solver import SolveRequest, solve
from .sullivan import make_frame, predicate_ii, predicate_iii, predicate_iv

PARAMS = ("angA", "angB", "angC", "alpha", "beta", "gamma", "scale")
RESULT_COLUMNS = ("n_solutions", "best_residual", "pred_ii", "pred_iii", "pred_iv")


@dataclass(frozen=True)
class AxisSpec:
    name: str
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.name not in PARAMS:
            raise ValueError(f"unknown sweep parameter {self.name!r}; choose from {PARAMS}")
        if self.steps < 2:
            raise ValueError("an axis needs at least 2 steps")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


def parse_axis(text: str) -> AxisSpec:
    """Parse ``name=start:stop:steps``."""
    try:
        name, rng = text.split("=", 1)
        start, stop, steps = rng.split(":")
        return AxisSpec(name.strip(), float(start), float(stop), int(steps))
    except ValueError as exc:
        raise ValueError(f"bad axis spec {text!r}: {exc}") from exc


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}
_UNOPS = {ast.USub: operator.neg, ast.UAdd: operator.pos}


@dataclass(frozen=True)
class Link:
    """``targets`` are all set to ``expr`` evaluated over the other parameters."""

    targets: tuple[str, ...]
    expr: str
    tree: ast.Expression = field(compare=False, repr=False)

    def evaluate(self, params: dict) -> float:
        def ev(node):
            if isinstance(node, ast.Expression):
                return ev(node.body)
            if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
                return float(node.value)
            if isinstance(node, ast.Name):
                if node.id == "pi":
                    return math.pi
                if node.id in params:
                    return float(params[node.id])
                raise ValueError(f"unknown name {node.id!r} in link {self.expr!r}")
            if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
                return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
            if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
                return _UNOPS[type(node.op)](ev(node.operand))
            raise ValueError(f"unsupported construct in link {self.expr!r}")

        return ev(self.tree)


def parse_link(text: str) -> Link:
    """Parse ``angA=angB=(pi-angC)/2``: arithmetic over parameters and ``pi``."""
    parts = [p.strip() for p in text.split("=")]
    if len(parts) < 2 or not all(parts):
        raise ValueError(f"bad link {text!r}")
    *targets, expr = parts
    for t in targets:
        if t not in PARAMS:
            raise ValueError(f"unknown link target {t!r}")
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"bad link expression {expr!r}") from exc
    link = Link(tuple(targets), expr, tree)
    link.evaluate({p: 1.0 for p in PARAMS})  # reject unsupported syntax early
    return link


@dataclass
class SweepCell:
    index: tuple[int, ...]
    params: dict
    n_solutions: int | None = None
    best_residual: float | None = None
    pred_ii: bool | None = None
    pred_iii: bool | None = None
    pred_iv: bool | None = None
    error: str | None = None

    @property
    def valid(self) -> bool:
        return self.error is None

    @property
    def feasible(self) -> bool:
        return bool(self.n_solutions)


@dataclass
class SweepGrid:
    axes: tuple[AxisSpec, ...]
    links: tuple[Link, ...]
    cells: list[SweepCell]

    @property
    def columns(self) -> list[str]:
        cols = [a.name for a in self.axes]
        for link in self.links:
            cols.extend(t for t in link.targets if t not in cols)
        return cols

    def to_csv(self, convert=None) -> str:
        """CSV text; ``convert`` maps a column name and value for output units."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        cols = self.columns
        writer.writerow([*cols, *RESULT_COLUMNS])
        fmt = lambda x: format(float(x), ".17g")  # noqa: E731
        for cell in self.cells:
            row = []
            for c in cols:
                v = cell.params[c]
                row.append(fmt(convert(c, v) if convert else v))
            if cell.valid:
                row.append(str(cell.n_solutions))
                row.append(fmt(cell.best_residual) if cell.best_residual is not None else "")
            else:
                row.extend(["-1", ""])
            for p in (cell.pred_ii, cell.pred_iii, cell.pred_iv):
                row.append("" if p is None else str(int(p)))
            writer.writerow(row)
        return buf.getvalue()


def _evaluate(template: SolveRequest, index, params: dict) -> SweepCell:
    cell = SweepCell(tuple(index), dict(params))
    try:
        shape = validate_shape(params["angA"], params["angB"], params["angC"])
    except TrifitError as exc:
        cell.error = f"{type(exc).__name__}: {exc}"
        return cell
    gamma = params["gamma"]
    if 0.0 < gamma < math.pi:
        frame = make_frame(shape, gamma, params["scale"])
        cell.pred_ii = predicate_ii(frame)
        cell.pred_iii = predicate_iii(frame)
        cell.pred_iv = predicate_iv(frame)
    try:
        config = validate_config(params["alpha"], params["beta"], params["gamma"])
        req = replace(template, shape=shape, config=config, scale=params["scale"])
        sols = solve(req)
    except TrifitError as exc:
        cell.error = f"{type(exc).__name__}: {exc}"
        return cell
    cell.n_solutions = len(sols)
    cell.best_residual = min((s.residual for s in sols), default=None)
    return cell


def _evaluate_packed(args):
    return _evaluate(*args)


def sweep(template: SolveRequest, axes, links=(), jobs: int = 1) -> SweepGrid:
    """Solve every cell of the Cartesian grid spanned by ``axes``.

    Values are radians; link expressions see ``pi`` and the other parameters
    after the axis values are applied. Cells come back in grid order whatever
    ``jobs`` is.
    """
    axes = tuple(axes)
    links = tuple(links)
    base = {
        "angA": template.shape.angA,
        "angB": template.shape.angB,
        "angC": template.shape.angC,
        "alpha": template.config.alpha,
        "beta": template.config.beta,
        "gamma": template.config.gamma,
        "scale": template.scale,
    }
    values = [a.values() for a in axes]
    work: list[tuple] = []
    for index in itertools.product(*(range(a.steps) for a in axes)):
        params = dict(base)
        for a, vals, i in zip(axes, values, index):
            params[a.name] = float(vals[i])
        for link in links:
            value = link.evaluate(params)
            for t in link.targets:
                params[t] = value
        work.append((template, index, params))

    if jobs > 1:
        chunk = max(1, len(work) // (4 * jobs))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            cells = list(pool.map(_evaluate_packed, work, chunksize=chunk))
    else:
        cells = [_evaluate(*args) for args in work]
    return SweepGrid(axes, links, cells)
