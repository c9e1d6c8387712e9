"""Scenario documents: YAML parsing, validation and serialization.

A scenario is a YAML mapping. Recognized top-level keys and defaults:

==================  =========================================================
key                 meaning (default)
==================  =========================================================
name                label (``"scenario"``)
dt                  integration step in s (0.01)
duration            simulated time in s (30.0)
estimator_delay     difference horizon T in s (5 * dt); must be >= dt
theta_dot_cap       clamp on the heading-rate estimate (2*pi / T)
potential           ``{K, a, b, c}``, required, ``0 < a < b < c``
gains               ``{K_theta, K, D_max}``, required, shared by all agents
agent_gains         optional ``{id: {K_theta, K, D_max}}`` overrides
obstacles           list of ``{center: [x, y], radius}`` (empty)
formation           ``{kind: affine, velocity, offsets | offset_base +
                    offset_step}`` or ``{kind: circular, center, radius,
                    rate, phases | phase_step}``, required
agents              list of ``{id, position: [x, y], heading}``, or
                    ``{random: {count, x_range, y_range, min_separation}}``
seed                RNG seed for random layouts (0)
hysteresis          exit band on the detection radius in m (1.0)
min_dwell           steps an agent stays in a mode before leaving it,
                    except to enter avoidance (10)
circ_range          obstacle surface distance that arms circumnavigation
                    (b + 3)
tol_conv            convergence tolerance in m (0.5)
v_cap, u_cap        actuator clips (K * D_max, K_theta * pi + theta_dot_cap)
==================  =========================================================

``offset_base``/``offset_step`` expand to ``offset_i = base + i * step`` and
``phase_step`` to ``phase_i = i * phase_step`` for every agent id ``i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
import yaml

from .avoidance import Obstacle
from .dynamics import Pose
from .geometry import Vec2, distance
from .potential import PotentialParams, admissible
from .supervisor import FormationSpec
from .tracking import TrackingGains


class ScenarioError(ValueError):
    """A scenario document that parses but violates an invariant."""


class ScenarioSyntaxError(ScenarioError):
    def __init__(self, message: str, line: int | None, column: int | None):
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"syntax error{where}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class AgentSpec:
    id: int
    pose: Pose


@dataclass(frozen=True)
class Scenario:
    agents: tuple[AgentSpec, ...]
    gains: TrackingGains
    potential: PotentialParams
    formation: FormationSpec
    obstacles: tuple[Obstacle, ...] = ()
    agent_gains: dict = field(default_factory=dict)
    name: str = "scenario"
    dt: float = 0.01
    duration: float = 30.0
    T: float | None = None
    theta_dot_cap: float | None = None
    h_hyst: float = 1.0
    min_dwell: int = 10
    d_circ: float | None = None
    tol_conv: float = 0.5
    v_cap: float | None = None
    u_cap: float | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.T is None:
            object.__setattr__(self, "T", 5 * self.dt)
        if self.theta_dot_cap is None:
            object.__setattr__(self, "theta_dot_cap", 2.0 * math.pi / self.T)
        if self.d_circ is None:
            object.__setattr__(self, "d_circ", self.potential.b + 3.0)

    @property
    def theta_dot_cap_value(self) -> float:
        return self.theta_dot_cap

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.dt))

    def gains_for(self, agent_id: int) -> TrackingGains:
        return self.agent_gains.get(agent_id, self.gains)

    def input_bounds(self, agent_id: int) -> tuple[float, float]:
        """Theoretical ``(|v|, |u|)`` bounds of the control laws."""
        g = self.gains_for(agent_id)
        return g.K * g.D_max, g.K_theta * math.pi + self.theta_dot_cap

    def input_caps(self, agent_id: int) -> tuple[float, float]:
        vb, ub = self.input_bounds(agent_id)
        return (
            vb if self.v_cap is None else self.v_cap,
            ub if self.u_cap is None else self.u_cap,
        )

    def is_admissible(self) -> bool:
        return admissible([a.pose.position for a in self.agents], self.potential)

    def validate(self) -> Scenario:
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ScenarioError("dt must be > 0")
        if not self.T >= self.dt:
            raise ScenarioError("estimator_delay must be >= dt")
        if not (self.duration > 0 and math.isfinite(self.duration)):
            raise ScenarioError("duration must be > 0")
        if not self.theta_dot_cap > 0:
            raise ScenarioError("theta_dot_cap must be > 0")
        if self.h_hyst < 0 or self.d_circ <= 0 or self.tol_conv <= 0:
            raise ScenarioError("hysteresis, circ_range and tol_conv must be positive")
        for cap in (self.v_cap, self.u_cap):
            if cap is not None and not cap > 0:
                raise ScenarioError("v_cap and u_cap must be > 0")
        if not self.agents:
            raise ScenarioError("scenario needs at least one agent")
        ids = [a.id for a in self.agents]
        if len(set(ids)) != len(ids):
            raise ScenarioError("agent ids must be unique")
        missing = set(ids) - self.formation.agent_ids()
        if missing:
            raise ScenarioError(f"formation has no reference for agents {sorted(missing)}")
        unknown = set(self.agent_gains) - set(ids)
        if unknown:
            raise ScenarioError(f"agent_gains for unknown agents {sorted(unknown)}")
        for a in self.agents:
            for k, obs in enumerate(self.obstacles):
                if obs.surface_distance(a.pose.position) <= 0:
                    raise ScenarioError(f"agent {a.id} starts inside obstacle {k}")
        pa = self.potential.a
        for i, ai in enumerate(self.agents):
            for aj in self.agents[i + 1 :]:
                if distance(ai.pose.position, aj.pose.position) <= pa:
                    raise ScenarioError(
                        f"agents {ai.id} and {aj.id} start within a = {pa} of each other"
                    )
        return self


# -- parsing ---------------------------------------------------------------

_TOP_KEYS = {
    "name", "dt", "duration", "estimator_delay", "theta_dot_cap", "potential",
    "gains", "agent_gains", "obstacles", "formation", "agents", "seed",
    "hysteresis", "min_dwell", "circ_range", "tol_conv", "v_cap", "u_cap",
}


def _num(value, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{what} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ScenarioError(f"{what} must be finite")
    return value


def _count(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ScenarioError(f"{what} must be a non-negative integer")
    return value


def _pair(value, what: str) -> tuple[float, float]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ScenarioError(f"{what} must be a pair [x, y]")
    return (_num(value[0], what), _num(value[1], what))


def _mapping(value, what: str, required: set[str], optional: set[str] = frozenset()):
    if not isinstance(value, dict):
        raise ScenarioError(f"{what} must be a mapping")
    keys = set(value)
    if required - keys:
        raise ScenarioError(f"{what} is missing {sorted(required - keys)}")
    if keys - required - optional:
        raise ScenarioError(f"{what} has unknown keys {sorted(map(str, keys - required - optional))}")
    return value


def _gains(value, what: str) -> TrackingGains:
    m = _mapping(value, what, {"K_theta", "K", "D_max"})
    try:
        return TrackingGains(
            _num(m["K_theta"], f"{what}.K_theta"),
            _num(m["K"], f"{what}.K"),
            _num(m["D_max"], f"{what}.D_max"),
        )
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None


def _formation(value, ids: list[int]) -> FormationSpec:
    if not isinstance(value, dict) or "kind" not in value:
        raise ScenarioError("formation must be a mapping with a 'kind'")
    kind = value["kind"]
    if kind == "affine":
        m = _mapping(value, "formation", {"kind", "velocity"},
                     {"offsets", "offset_base", "offset_step"})
        if "offsets" in m:
            if not isinstance(m["offsets"], dict):
                raise ScenarioError("formation.offsets must map agent id to [x, y]")
            offsets = {int(k): _pair(v, f"formation.offsets[{k}]") for k, v in m["offsets"].items()}
        elif "offset_base" in m and "offset_step" in m:
            bx, by = _pair(m["offset_base"], "formation.offset_base")
            sx, sy = _pair(m["offset_step"], "formation.offset_step")
            offsets = {i: (bx + i * sx, by + i * sy) for i in ids}
        else:
            raise ScenarioError("affine formation needs offsets or offset_base + offset_step")
        return FormationSpec("affine", velocity=_pair(m["velocity"], "formation.velocity"),
                             offsets=offsets)
    if kind == "circular":
        m = _mapping(value, "formation", {"kind", "center", "radius", "rate"},
                     {"phases", "phase_step"})
        if "phases" in m:
            if not isinstance(m["phases"], dict):
                raise ScenarioError("formation.phases must map agent id to an angle")
            phases = {int(k): _num(v, f"formation.phases[{k}]") for k, v in m["phases"].items()}
        elif "phase_step" in m:
            step = _num(m["phase_step"], "formation.phase_step")
            phases = {i: i * step for i in ids}
        else:
            raise ScenarioError("circular formation needs phases or phase_step")
        try:
            return FormationSpec("circular", center=_pair(m["center"], "formation.center"),
                                 radius=_num(m["radius"], "formation.radius"),
                                 rate=_num(m["rate"], "formation.rate"), phases=phases)
        except ValueError as exc:
            raise ScenarioError(str(exc)) from None
    raise ScenarioError(f"unknown formation kind {kind!r}")


def random_layout(count, x_range, y_range, min_separation, seed) -> list[AgentSpec]:
    """Rejection-sample `count` poses with pairwise spacing >= `min_separation`."""
    rng = np.random.default_rng(seed)
    points: list[Vec2] = []
    agents = []
    tries = 0
    while len(points) < count:
        tries += 1
        if tries > 10000 * count:
            raise ScenarioError("could not place random agents; enlarge the layout box")
        p = Vec2(float(rng.uniform(*x_range)), float(rng.uniform(*y_range)))
        if all(distance(p, q) >= min_separation for q in points):
            points.append(p)
            heading = float(rng.uniform(-math.pi, math.pi))
            agents.append(AgentSpec(len(points), Pose(p, heading)))
    return agents


def _agents(value, seed: int, b: float) -> list[AgentSpec]:
    if isinstance(value, dict):
        m = _mapping(value, "agents", {"random"})
        r = _mapping(m["random"], "agents.random", {"count", "x_range", "y_range"},
                     {"min_separation"})
        count = r["count"]
        if not isinstance(count, int) or count < 1:
            raise ScenarioError("agents.random.count must be a positive integer")
        sep = _num(r.get("min_separation", b), "agents.random.min_separation")
        return random_layout(count, _pair(r["x_range"], "agents.random.x_range"),
                             _pair(r["y_range"], "agents.random.y_range"), sep, seed)
    if not isinstance(value, list):
        raise ScenarioError("agents must be a list or a random layout mapping")
    out = []
    for k, item in enumerate(value):
        m = _mapping(item, f"agents[{k}]", {"id", "position"}, {"heading"})
        if not isinstance(m["id"], int) or isinstance(m["id"], bool):
            raise ScenarioError(f"agents[{k}].id must be an integer")
        pos = _pair(m["position"], f"agents[{k}].position")
        heading = _num(m.get("heading", 0.0), f"agents[{k}].heading")
        out.append(AgentSpec(m["id"], Pose(Vec2(*pos), heading)))
    return out


def parse_scenario(text: str) -> Scenario:
    """Parse and validate a YAML scenario document.

    Raises
    ------
    ScenarioSyntaxError
        Malformed YAML, with the line and column of the problem (1-based).
    ScenarioError
        Any semantic violation, naming the failed invariant.
    """
    try:
        doc = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark
        line = mark.line + 1 if mark is not None else None
        col = mark.column + 1 if mark is not None else None
        raise ScenarioSyntaxError(exc.problem or str(exc), line, col) from None
    except yaml.YAMLError as exc:
        raise ScenarioSyntaxError(str(exc), None, None) from None
    doc = _mapping(doc, "scenario", {"potential", "gains", "formation", "agents"},
                   _TOP_KEYS)

    p = _mapping(doc["potential"], "potential", {"K", "a", "b", "c"})
    try:
        potential = PotentialParams(_num(p["K"], "potential.K"), _num(p["a"], "potential.a"),
                                    _num(p["b"], "potential.b"), _num(p["c"], "potential.c"))
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None

    seed = doc.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ScenarioError("seed must be an integer")
    agents = _agents(doc["agents"], seed, potential.b)
    ids = [a.id for a in agents]

    obstacles = []
    raw_obs = doc.get("obstacles") or []
    if not isinstance(raw_obs, list):
        raise ScenarioError("obstacles must be a list")
    for k, item in enumerate(raw_obs):
        m = _mapping(item, f"obstacles[{k}]", {"center", "radius"})
        try:
            obstacles.append(Obstacle(Vec2(*_pair(m["center"], f"obstacles[{k}].center")),
                                      _num(m["radius"], f"obstacles[{k}].radius")))
        except ScenarioError:
            raise
        except ValueError as exc:
            raise ScenarioError(f"obstacles[{k}]: {exc}") from None

    agent_gains = {}
    raw_ag = doc.get("agent_gains") or {}
    if not isinstance(raw_ag, dict):
        raise ScenarioError("agent_gains must map agent id to gains")
    for k, v in raw_ag.items():
        agent_gains[int(k)] = _gains(v, f"agent_gains[{k}]")

    def opt(key, default=None):
        return default if doc.get(key) is None else _num(doc[key], key)

    name = doc.get("name", "scenario")
    if not isinstance(name, str):
        raise ScenarioError("name must be a string")
    dt = opt("dt", 0.01)
    if not dt > 0:
        raise ScenarioError("dt must be > 0")
    scenario = Scenario(
        agents=tuple(agents),
        gains=_gains(doc["gains"], "gains"),
        potential=potential,
        formation=_formation(doc["formation"], ids),
        obstacles=tuple(obstacles),
        agent_gains=agent_gains,
        name=name,
        dt=dt,
        duration=opt("duration", 30.0),
        T=opt("estimator_delay"),
        theta_dot_cap=opt("theta_dot_cap"),
        h_hyst=opt("hysteresis", 1.0),
        min_dwell=_count(doc.get("min_dwell", 10), "min_dwell"),
        d_circ=opt("circ_range"),
        tol_conv=opt("tol_conv", 0.5),
        v_cap=opt("v_cap"),
        u_cap=opt("u_cap"),
        seed=seed,
    )
    return scenario.validate()


def load_scenario(ref: str | Path) -> Scenario:
    """Load a scenario from a path, or a shipped scenario by bare name."""
    path = Path(ref)
    if path.is_file():
        return parse_scenario(path.read_text())
    name = str(ref)
    if not name.endswith(".yaml"):
        name += ".yaml"
    shipped = resources.files(__package__).joinpath("scenarios", name)
    if shipped.is_file():
        return parse_scenario(shipped.read_text())
    raise FileNotFoundError(f"no scenario file or shipped scenario named {ref!r}")


def _gains_doc(g: TrackingGains) -> dict:
    return {"K_theta": g.K_theta, "K": g.K, "D_max": g.D_max}


def scenario_to_dict(s: Scenario) -> dict:
    """Fully explicit document for `s`; every default is written out."""
    f = s.formation
    if f.kind == "affine":
        formation = {"kind": "affine", "velocity": list(f.velocity),
                     "offsets": {i: list(f.offsets[i]) for i in sorted(f.offsets)}}
    else:
        formation = {"kind": "circular", "center": list(f.center), "radius": f.radius,
                     "rate": f.rate, "phases": {i: f.phases[i] for i in sorted(f.phases)}}
    return {
        "name": s.name,
        "dt": s.dt,
        "duration": s.duration,
        "estimator_delay": s.T,
        "theta_dot_cap": s.theta_dot_cap,
        "hysteresis": s.h_hyst,
        "min_dwell": s.min_dwell,
        "circ_range": s.d_circ,
        "tol_conv": s.tol_conv,
        "v_cap": s.v_cap,
        "u_cap": s.u_cap,
        "seed": s.seed,
        "potential": {"K": s.potential.K_ij, "a": s.potential.a,
                      "b": s.potential.b, "c": s.potential.c},
        "gains": _gains_doc(s.gains),
        "agent_gains": {i: _gains_doc(g) for i, g in sorted(s.agent_gains.items())},
        "obstacles": [{"center": [o.center.x, o.center.y], "radius": o.radius}
                      for o in s.obstacles],
        "formation": formation,
        "agents": [{"id": a.id, "position": [a.pose.x, a.pose.y], "heading": a.pose.heading}
                   for a in s.agents],
    }


def dump_scenario(s: Scenario) -> str:
    return yaml.safe_dump(scenario_to_dict(s), sort_keys=False, default_flow_style=None)
