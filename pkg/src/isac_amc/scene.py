"""MU trajectories and ground-truth observables.

The BS sits at the origin with its array boresight along +y; azimuth is
``atan2(x, y)``. The 80 m x 40 m ground area is centred on the BS. Each
trajectory is a chain of exact lines and arcs (plus one dense curve for the
sine shapes) sampled by arc length at ``speed * frame_interval``.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, fsolve

C = 299_792_458.0


class TrajectoryKind(enum.Enum):
    UShaped = "u_shaped"
    FigureOfEight = "figure_of_eight"
    Sine = "sine"
    Hybrid = "hybrid"

    @classmethod
    def parse(cls, text):
        if isinstance(text, cls):
            return text
        key = str(text).strip().lower().replace("-", "_")
        aliases = {"u": "u_shaped", "ushaped": "u_shaped", "figure8": "figure_of_eight",
                   "figureofeight": "figure_of_eight", "fig8": "figure_of_eight",
                   "eight": "figure_of_eight"}
        key = aliases.get(key.replace("_", ""), key)
        for kind in cls:
            if kind.value == key or kind.name.lower() == key:
                return kind
        raise ValueError(f"unknown trajectory kind: {text!r}")


@dataclass(frozen=True)
class SceneConfig:
    area: tuple = (80.0, 40.0)
    speed: float = 15.0
    frame_interval: float = 0.010
    duration: float = None
    bs_position: tuple = (0.0, 0.0)
    rcs_dbsm: float = 0.0
    radar_power_gain: float = 1000.0
    carrier_freq: float = 60e9

    def __post_init__(self):
        if self.speed <= 0:
            raise ValueError("speed must be positive")
        if self.frame_interval <= 0:
            raise ValueError("frame_interval must be positive")
        if self.duration is not None and self.duration < self.frame_interval:
            raise ValueError("duration must be at least one frame interval")
        if min(self.area) <= 0:
            raise ValueError("area extents must be positive")

    @property
    def wavelength(self):
        return C / self.carrier_freq

    def contains(self, xy, tol=1e-9):
        x = np.asarray(xy)[..., 0] - self.bs_position[0]
        y = np.asarray(xy)[..., 1] - self.bs_position[1]
        return (np.abs(x) <= self.area[0] / 2 + tol) & (np.abs(y) <= self.area[1] / 2 + tol)


@dataclass(frozen=True)
class TargetState:
    time: float
    position: tuple
    range_m: float
    azimuth: float
    radial_velocity: float
    reflectivity: float = 1.0
    velocity: tuple = (0.0, 0.0)


def reflectivity_from_rcs(range_m, rcs_dbsm=0.0, wavelength=C / 60e9, power_gain=1000.0):
    """Two-way echo amplitude from the radar range equation.

    amplitude = sqrt(G * lambda^2 * sigma / ((4 pi)^3 r^4)), with G the
    transmit power times antenna gains in watts.
    """
    sigma = 10.0 ** (rcs_dbsm / 10.0)
    r = max(float(range_m), 1e-3)
    return math.sqrt(power_gain * wavelength**2 * sigma / ((4 * math.pi) ** 3 * r**4))


def ground_truth_observables(position, velocity=(0.0, 0.0)):
    """(range, azimuth from boresight, radial velocity; positive = receding)."""
    x, y = float(position[0]), float(position[1])
    r = math.hypot(x, y)
    if r == 0.0:
        return 0.0, 0.0, 0.0
    az = math.atan2(x, y)
    vr = (x * velocity[0] + y * velocity[1]) / r
    return r, az, vr


# --------------------------------------------------------------------------
# path primitives


class Segment:
    length = 0.0

    def point(self, s):
        """Position and unit tangent at arc lengths ``s`` (array, 0..length)."""
        raise NotImplementedError


class Line(Segment):
    def __init__(self, p0, p1):
        self.p0 = np.asarray(p0, float)
        self.p1 = np.asarray(p1, float)
        self.length = float(np.linalg.norm(self.p1 - self.p0))
        self.u = (self.p1 - self.p0) / self.length

    def point(self, s):
        s = np.asarray(s, float)[:, None]
        return self.p0 + s * self.u, np.broadcast_to(self.u, s.shape[:1] + (2,))


class Arc(Segment):
    """Circular arc; ``sweep`` is signed (positive = counter-clockwise)."""

    def __init__(self, center, radius, theta0, sweep):
        self.center = np.asarray(center, float)
        self.radius = float(radius)
        self.theta0 = float(theta0)
        self.sweep = float(sweep)
        self.length = abs(self.sweep) * self.radius

    def point(self, s):
        s = np.asarray(s, float)
        direction = np.sign(self.sweep)
        th = self.theta0 + direction * s / self.radius
        pos = self.center + self.radius * np.stack([np.cos(th), np.sin(th)], axis=-1)
        tan = direction * np.stack([-np.sin(th), np.cos(th)], axis=-1)
        return pos, tan


class Curve(Segment):
    """Dense polyline through y = f(x), re-parametrized by arc length."""

    def __init__(self, x0, x1, func, n=20001):
        x = np.linspace(x0, x1, n)
        y = func(x)
        self.xy = np.stack([x, y], axis=-1)
        ds = np.linalg.norm(np.diff(self.xy, axis=0), axis=1)
        self.cum = np.concatenate([[0.0], np.cumsum(ds)])
        self.length = float(self.cum[-1])

    def point(self, s):
        s = np.clip(np.asarray(s, float), 0.0, self.length)
        pos = np.stack([np.interp(s, self.cum, self.xy[:, k]) for k in range(2)], axis=-1)
        i = np.clip(np.searchsorted(self.cum, s, side="right") - 1, 0, len(self.cum) - 2)
        d = self.xy[i + 1] - self.xy[i]
        return pos, d / np.linalg.norm(d, axis=-1, keepdims=True)


@dataclass
class Path:
    segments: list
    closed: bool = False
    _cum: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self._cum = np.concatenate([[0.0], np.cumsum([seg.length for seg in self.segments])])

    @property
    def length(self):
        return float(self._cum[-1])

    def sample(self, s):
        s = np.asarray(s, float)
        if self.closed:
            s = np.mod(s, self.length)
        elif np.any(s > self.length + 1e-9):
            raise ValueError(f"path of length {self.length:.2f} m sampled at {s.max():.2f} m")
        idx = np.clip(np.searchsorted(self._cum, s, side="right") - 1, 0, len(self.segments) - 1)
        pos = np.empty(s.shape + (2,))
        tan = np.empty(s.shape + (2,))
        for k, seg in enumerate(self.segments):
            mask = idx == k
            if np.any(mask):
                local = np.clip(s[mask] - self._cum[k], 0.0, seg.length)
                pos[mask], tan[mask] = seg.point(local)
        return pos, tan

    def rotated(self, angle):
        return _RotatedPath(self, angle)


class _RotatedPath:
    def __init__(self, base, angle):
        self.base = base
        c, s = math.cos(angle), math.sin(angle)
        self.rot = np.array([[c, -s], [s, c]])
        self.closed = base.closed

    @property
    def length(self):
        return self.base.length

    def sample(self, s):
        pos, tan = self.base.sample(s)
        return pos @ self.rot.T, tan @ self.rot.T


# --------------------------------------------------------------------------
# the four trajectories

U_START_RANGE = 40.0
U_HALF_TIME = 3.0
U_ARC_OFFSET = 0.5
U_AXIS_ANGLE = math.radians(20.0)

EIGHT_NEAR_RANGE = 1.0
EIGHT_FAR_RANGE = 40.0
EIGHT_OUT_TIME = 3.0
# 0.75 rad (a full 2 s on the circle) pushes the entry fillet 0.25 m past
# the area's +-20 m edge; the fillets themselves run within a metre of 40 m
EIGHT_DWELL_ANGLE = 0.72


def u_shaped_path(speed=15.0):
    """Two parallel legs joined by a semicircle wrapped round the BS.

    The turn's centre sits ``U_ARC_OFFSET`` beyond the BS along the U axis.
    The radius is chosen so the apex (closest approach) is reached after
    ``U_HALF_TIME`` and the start is ``U_START_RANGE`` from the BS.
    """
    half = speed * U_HALF_TIME
    c = U_ARC_OFFSET

    def start_range(radius):
        leg = half - math.pi * radius / 2
        return math.hypot(c + leg, radius) - U_START_RANGE

    radius = brentq(start_range, 0.1, 2 * half / math.pi - 1e-6)
    leg = half - math.pi * radius / 2
    segments = [
        Line((c + leg, radius), (c, radius)),
        Arc((c, 0.0), radius, math.pi / 2, math.pi),
        Line((c, -radius), (c + leg, -radius)),
    ]
    return Path(segments).rotated(U_AXIS_ANGLE)


def _fillet_to_circle(point, direction, big_r, rho, turn):
    """Arc of radius ``rho`` leaving the ray ``point + s*direction`` and
    joining the circle |p| = big_r tangentially from inside.

    ``turn`` is +1 for a left (counter-clockwise) turn, -1 for right.
    Returns (s_tangent, fillet Arc, polar angle of the join).
    """
    d = np.asarray(direction, float)
    normal = turn * np.array([-d[1], d[0]])
    # centre = point + s*d + rho*normal, with |centre| = big_r - rho
    base = np.asarray(point, float) + rho * normal
    bd = base @ d
    disc = bd**2 - (base @ base - (big_r - rho) ** 2)
    s_t = -bd + math.sqrt(disc)
    center = base + s_t * d
    start = center - rho * normal
    theta0 = math.atan2(start[1] - center[1], start[0] - center[0])
    join = math.atan2(center[1], center[0])
    sweep = turn * ((turn * (join - theta0)) % (2 * math.pi))
    return s_t, Arc(center, rho, theta0, sweep), join


def _eight_lobe(alpha, rho, speed):
    """Right lobe: out along line A, dwell on the far circle, back along B.

    Line A has heading ``alpha`` above +x and passes ``EIGHT_NEAR_RANGE`` from
    the BS; line B is its mirror image about the y axis.
    """
    r0 = EIGHT_NEAR_RANGE
    d_a = np.array([math.cos(alpha), math.sin(alpha)])
    start_a = r0 * np.array([-math.sin(alpha), math.cos(alpha)])
    s_a, fil_a, join_a = _fillet_to_circle(start_a, d_a, EIGHT_FAR_RANGE, rho, -1)

    # B traversed inward; build its outgoing fillet reversed in time
    d_b_in = np.array([-math.cos(alpha), math.sin(alpha)])
    end_b = r0 * np.array([math.sin(alpha), math.cos(alpha)])
    s_b, fil_b_rev, join_b = _fillet_to_circle(end_b, -d_b_in, EIGHT_FAR_RANGE, rho, +1)
    return dict(start_a=start_a, d_a=d_a, s_a=s_a, fil_a=fil_a, join_a=join_a,
                end_b=end_b, d_b_in=d_b_in, s_b=s_b, fil_b_rev=fil_b_rev, join_b=join_b)


def _reverse_arc(arc):
    theta_end = arc.theta0 + arc.sweep
    return Arc(arc.center, arc.radius, theta_end, -arc.sweep)


def figure_of_eight_path(speed=15.0):
    """Closed figure-of-eight: two mirror-image lobes reaching 40 m.

    Out-leg (line plus fillet) takes ``EIGHT_OUT_TIME`` and the dwell on the
    40 m circle spans ``EIGHT_DWELL_ANGLE``; the line heading and fillet
    radius are solved for these two constraints.
    """
    out_len = speed * EIGHT_OUT_TIME
    dwell = EIGHT_DWELL_ANGLE

    def residual(params):
        alpha, rho = params
        lobe = _eight_lobe(alpha, rho, speed)
        return [lobe["s_a"] + lobe["fil_a"].length - out_len,
                lobe["join_a"] - lobe["join_b"] - dwell]

    alpha, rho = fsolve(residual, [0.4, 8.0], xtol=1e-12)
    lobe = _eight_lobe(alpha, rho, speed)
    p_a = lobe["start_a"] + lobe["s_a"] * lobe["d_a"]
    p_b = lobe["end_b"] - lobe["s_b"] * lobe["d_b_in"]
    right = [
        Line(lobe["start_a"], p_a),
        lobe["fil_a"],
        Arc((0.0, 0.0), EIGHT_FAR_RANGE, lobe["join_a"], lobe["join_b"] - lobe["join_a"]),
        _reverse_arc(lobe["fil_b_rev"]),
        Line(p_b, lobe["end_b"]),
    ]
    left = [_mirror_x(seg) for seg in right]
    return Path(right + left, closed=True)


def _mirror_x(seg):
    """Mirror a segment about the y axis (x -> -x), preserving travel order."""
    if isinstance(seg, Line):
        return Line(seg.p0 * [-1, 1], seg.p1 * [-1, 1])
    if isinstance(seg, Arc):
        return Arc(seg.center * [-1, 1], seg.radius, math.pi - seg.theta0, -seg.sweep)
    raise TypeError(type(seg))


SINE_X_EXTENT = 36.0
SINE_OFFSET = 1.5
SINE_AMPLITUDE = 10.0
SINE_WAVELENGTH = 24.0


def sine_path():
    """y = offset + A sin(2 pi x / wavelength), swept left to right."""
    k = 2 * math.pi / SINE_WAVELENGTH
    return Path([Curve(-SINE_X_EXTENT, SINE_X_EXTENT,
                       lambda x: SINE_OFFSET + SINE_AMPLITUDE * np.sin(k * x))])


HYBRID_LEG = (-38.0, -12.0)
HYBRID_Y = -4.0
HYBRID_WIGGLE = 3.0
HYBRID_SINE_END = 24.0
HYBRID_SINE_WAVELENGTH = 24.0
HYBRID_TURN_RADIUS = 8.0


def hybrid_path():
    """Straight leg, raised-cosine wiggle past the BS, then a return arc.

    The wiggle ``y = y0 + A (1 - cos(2 pi (x - x0) / wavelength))`` starts
    and ends with zero slope, so every join is tangent-continuous.
    """
    x_leg0, x_leg1 = HYBRID_LEG
    y0 = HYBRID_Y
    k = 2 * math.pi / HYBRID_SINE_WAVELENGTH
    wiggle = Curve(x_leg1, HYBRID_SINE_END,
                   lambda x: y0 + HYBRID_WIGGLE * (1 - np.cos(k * (x - x_leg1))))
    y_end = wiggle.xy[-1, 1]
    turn = Arc((HYBRID_SINE_END, y_end + HYBRID_TURN_RADIUS), HYBRID_TURN_RADIUS,
               -math.pi / 2, math.pi)
    return Path([Line((x_leg0, y0), (x_leg1, y0)), wiggle, turn])


DEFAULT_DURATION = {
    TrajectoryKind.UShaped: 2 * U_HALF_TIME,
    TrajectoryKind.FigureOfEight: 10.0,
    TrajectoryKind.Sine: None,
    TrajectoryKind.Hybrid: None,
}


def trajectory_path(kind, speed=15.0):
    kind = TrajectoryKind.parse(kind)
    if kind is TrajectoryKind.UShaped:
        return u_shaped_path(speed)
    if kind is TrajectoryKind.FigureOfEight:
        return figure_of_eight_path(speed)
    if kind is TrajectoryKind.Sine:
        return sine_path()
    if kind is TrajectoryKind.Hybrid:
        return hybrid_path()
    raise ValueError(f"unknown trajectory kind: {kind!r}")  # pragma: no cover


def trajectory_duration(kind, cfg):
    kind = TrajectoryKind.parse(kind)
    if cfg.duration is not None:
        return cfg.duration
    default = DEFAULT_DURATION[kind]
    if default is None:
        default = trajectory_path(kind, cfg.speed).length / cfg.speed
    return default


def sample_trajectory(kind, cfg=None):
    """Equally spaced MU states from t = 0 to the duration, both ends included."""
    cfg = cfg or SceneConfig()
    kind = TrajectoryKind.parse(kind)
    path = trajectory_path(kind, cfg.speed)
    duration = trajectory_duration(kind, cfg)
    n = int(math.floor(duration / cfg.frame_interval + 1e-9)) + 1
    t = np.arange(n) * cfg.frame_interval
    s = t * cfg.speed
    if not path.closed and s[-1] > path.length + 1e-6:
        raise ValueError(f"{kind.name} path is {path.length:.2f} m long, "
                         f"too short for {duration} s at {cfg.speed} m/s")
    s = np.minimum(s, path.length) if not path.closed else s
    pos, tan = path.sample(s)
    pos = pos + np.asarray(cfg.bs_position, float)
    if not np.all(cfg.contains(pos)):
        bad = pos[~cfg.contains(pos)][0]
        raise ValueError(f"{kind.name} trajectory leaves the area at {tuple(bad)}")

    vel = cfg.speed * tan
    rel = pos - np.asarray(cfg.bs_position, float)
    states = []
    for i in range(n):
        r, az, vr = ground_truth_observables(rel[i], vel[i])
        amp = reflectivity_from_rcs(r, cfg.rcs_dbsm, cfg.wavelength, cfg.radar_power_gain)
        states.append(TargetState(float(t[i]), (float(pos[i, 0]), float(pos[i, 1])),
                                  r, az, vr, amp, (float(vel[i, 0]), float(vel[i, 1]))))
    return states
