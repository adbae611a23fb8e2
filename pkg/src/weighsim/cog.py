"""Deck mathematics: totals, centre of gravity, sector splits, alerts.

Two deck configurations are supported:

* two cells, left/right, spaced the deck breadth apart: total weight and
  the lateral CoG offset from the centreline;
* four cells, one per corner: total weight, longitudinal and lateral CoG,
  front/rear/left/right sector weights, per-quadrant percentage shares and
  alert flags.

Coordinate conventions (fixed package-wide):

    x   longitudinal, metres from the front cell line, rearward positive
    y   lateral, metres from the RIGHT cell line, leftward positive

So x_cg ∈ [0, wheelbase] and y_cg ∈ [0, track]. y_cg is deliberately kept
in that wheel-line-origin form; callers wanting a signed distance from the
vehicle centreline (positive = left-biased) should read
`centreline_offset_m = y_cg - track/2`, which is exposed on the
assessment and equals the two-cell lateral offset when breadth == track.

Threshold comparisons are strict: a total exactly at the overload limit or
a quadrant exactly at the share limit does NOT raise a flag; heaviness on
an axis likewise needs a strict majority (ties report balanced).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidReadingError, UndefinedCogError

QUADRANT_NAMES = ("FL", "FR", "RL", "RR")


@dataclass(frozen=True)
class DeckGeometry:
    """Cell spacing of the deck.

    wheelbase_m  front-to-rear cell distance
    track_m      left-to-right cell distance (four-cell deck)
    breadth_m    left-to-right spacing of the two-cell deck; defaults to
                 the track when omitted
    """

    wheelbase_m: float
    track_m: float
    breadth_m: float | None = None

    def __post_init__(self) -> None:
        if self.breadth_m is None:
            object.__setattr__(self, "breadth_m", self.track_m)
        for name in ("wheelbase_m", "track_m", "breadth_m"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")


@dataclass(frozen=True)
class TwoCellReading:
    """Left/right cell masses in kg."""

    left_kg: float
    right_kg: float

    def __post_init__(self) -> None:
        if self.left_kg < 0 or self.right_kg < 0:
            raise InvalidReadingError(f"negative cell reading: {self}")


@dataclass(frozen=True)
class FourCellReading:
    """Masses in kg per corner: front-left, front-right, rear-left, rear-right."""

    fl_kg: float
    fr_kg: float
    rl_kg: float
    rr_kg: float

    def __post_init__(self) -> None:
        for name in ("fl_kg", "fr_kg", "rl_kg", "rr_kg"):
            if getattr(self, name) < 0:
                raise InvalidReadingError(f"negative cell reading: {name}={getattr(self, name)}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.fl_kg, self.fr_kg, self.rl_kg, self.rr_kg)

    def two_cell(self) -> TwoCellReading:
        """Collapse to the left/right pair."""
        return TwoCellReading(left_kg=self.fl_kg + self.rl_kg, right_kg=self.fr_kg + self.rr_kg)


@dataclass(frozen=True)
class AlertPolicy:
    """Alert thresholds. Both comparisons are strict (> flags, == does not)."""

    overload_threshold_kg: float
    quadrant_threshold_pct: float = 30.0

    def __post_init__(self) -> None:
        if self.overload_threshold_kg <= 0:
            raise ValueError(f"overload threshold must be > 0, got {self.overload_threshold_kg}")
        if self.quadrant_threshold_pct <= 0:
            raise ValueError(f"quadrant threshold must be > 0, got {self.quadrant_threshold_pct}")


#: Named threshold presets. The two-cell deck used 5 kg cells and alerted
#: above 9.5 kg; the four-cell deck used 120 kg cells and alerted above
#: 400 kg with a 30 % per-quadrant share limit.
POLICIES = {
    "prototype1": AlertPolicy(overload_threshold_kg=9.5),
    "prototype2": AlertPolicy(overload_threshold_kg=400.0, quadrant_threshold_pct=30.0),
}


def policy(name: str) -> AlertPolicy:
    try:
        return POLICIES[name]
    except KeyError:
        raise ValueError(f"unknown policy {name!r}; known: {sorted(POLICIES)}") from None


@dataclass(frozen=True)
class LoadAssessment:
    """Result of one four-cell weighing.

    CoG fields are None when the total weight is zero (undefined rather
    than NaN). quadrant_pct is in FL, FR, RL, RR order and sums to 100
    when the total is positive.
    """

    total_kg: float
    x_cg_m: float | None
    y_cg_m: float | None
    centreline_offset_m: float | None
    front_kg: float
    rear_kg: float
    left_kg: float
    right_kg: float
    quadrant_pct: tuple[float, float, float, float]
    overloaded: bool
    flagged_quadrants: tuple[str, ...]
    front_heavy: bool
    rear_heavy: bool
    left_heavy: bool
    right_heavy: bool


@dataclass(frozen=True)
class TwoCellAssessment:
    """Result of one two-cell weighing. Offset is None at zero total."""

    total_kg: float
    lateral_offset_m: float | None
    overloaded: bool
    left_heavy: bool
    right_heavy: bool


def total_weight_two_cell(r: TwoCellReading) -> float:
    """Total vehicle weight: the sum of both cell readings."""
    return r.left_kg + r.right_kg


def lateral_offset_two_cell(r: TwoCellReading, geom: DeckGeometry) -> float:
    """Lateral CoG distance from the centreline, positive toward the left cell.

        offset = (left - right) / total * breadth / 2
    """
    total = total_weight_two_cell(r)
    if total == 0:
        raise UndefinedCogError("lateral offset undefined at zero total weight")
    return (r.left_kg - r.right_kg) / total * (geom.breadth_m / 2.0)


def assess_two_cell(r: TwoCellReading, geom: DeckGeometry, policy: AlertPolicy) -> TwoCellAssessment:
    total = total_weight_two_cell(r)
    offset = lateral_offset_two_cell(r, geom) if total > 0 else None
    return TwoCellAssessment(
        total_kg=total,
        lateral_offset_m=offset,
        overloaded=total > policy.overload_threshold_kg,
        left_heavy=r.left_kg > r.right_kg,
        right_heavy=r.right_kg > r.left_kg,
    )


def assess_four_cell(r: FourCellReading, geom: DeckGeometry, policy: AlertPolicy) -> LoadAssessment:
    """Full four-cell assessment.

        x_cg = (rear sum)  * wheelbase / total    (0 = front cell line)
        y_cg = (left sum)  * track     / total    (0 = right cell line)
        quadrant share_i = w_i * 100 / total

    The total is formed from the front/rear sector sums so that the
    front+rear identity holds bit-exactly; the left/right grouping agrees
    to the last unit of floating-point precision.
    """
    front = r.fl_kg + r.fr_kg
    rear = r.rl_kg + r.rr_kg
    left = r.fl_kg + r.rl_kg
    right = r.fr_kg + r.rr_kg
    total = front + rear

    if total > 0:
        # multiply before dividing: keeps shares exact at round thresholds
        pct = tuple(w * 100.0 / total for w in r.as_tuple())
        x_cg = min(max(rear * geom.wheelbase_m / total, 0.0), geom.wheelbase_m)
        y_cg = min(max(left * geom.track_m / total, 0.0), geom.track_m)
        centreline = y_cg - geom.track_m / 2.0
        flagged = tuple(
            name
            for name, share in zip(QUADRANT_NAMES, pct)
            if share > policy.quadrant_threshold_pct
        )
    else:
        pct = (0.0, 0.0, 0.0, 0.0)
        x_cg = y_cg = centreline = None
        flagged = ()

    return LoadAssessment(
        total_kg=total,
        x_cg_m=x_cg,
        y_cg_m=y_cg,
        centreline_offset_m=centreline,
        front_kg=front,
        rear_kg=rear,
        left_kg=left,
        right_kg=right,
        quadrant_pct=pct,
        overloaded=total > policy.overload_threshold_kg,
        flagged_quadrants=flagged,
        front_heavy=front > rear,
        rear_heavy=rear > front,
        left_heavy=left > right,
        right_heavy=right > left,
    )


def classify(assessment: LoadAssessment | TwoCellAssessment, policy: AlertPolicy) -> list[str]:
    """Render raised flags as stable text lines (the LCD alert area).

    Exactly ["SAFE"] when no flag at all is raised. Otherwise one line per
    flag: OVERLOAD first, then IMBALANCE per quadrant in FL, FR, RL, RR
    order, then axis heaviness. The format is frozen for golden-file
    comparison.
    """
    lines: list[str] = []
    if assessment.overloaded:
        lines.append(
            f"OVERLOAD total={assessment.total_kg:.2f}kg"
            f" limit={policy.overload_threshold_kg:.2f}kg"
        )
    if isinstance(assessment, LoadAssessment):
        for name, share in zip(QUADRANT_NAMES, assessment.quadrant_pct):
            if name in assessment.flagged_quadrants:
                lines.append(
                    f"IMBALANCE {name}={share:.1f}% limit={policy.quadrant_threshold_pct:.1f}%"
                )
        if assessment.front_heavy:
            lines.append("FRONT-HEAVY")
        if assessment.rear_heavy:
            lines.append("REAR-HEAVY")
    if assessment.left_heavy:
        lines.append("LEFT-HEAVY")
    if assessment.right_heavy:
        lines.append("RIGHT-HEAVY")
    if not lines:
        lines.append("SAFE")
    return lines


def render_lcd(assessment: LoadAssessment | TwoCellAssessment, policy: AlertPolicy) -> str:
    """Multi-line human rendering: totals, CoG, sectors, then alert lines."""
    out: list[str] = [f"TOTAL  {assessment.total_kg:9.2f} kg"]
    if isinstance(assessment, LoadAssessment):
        if assessment.x_cg_m is not None:
            out.append(
                f"COG    x={assessment.x_cg_m:.3f}m y={assessment.y_cg_m:.3f}m"
                f" (centreline {assessment.centreline_offset_m:+.3f}m)"
            )
        else:
            out.append("COG    undefined (zero load)")
        out.append(f"FRONT  {assessment.front_kg:9.2f} kg  REAR   {assessment.rear_kg:9.2f} kg")
        out.append(f"LEFT   {assessment.left_kg:9.2f} kg  RIGHT  {assessment.right_kg:9.2f} kg")
        pct = assessment.quadrant_pct
        out.append(
            f"SHARE  FL {pct[0]:5.1f}%  FR {pct[1]:5.1f}%  RL {pct[2]:5.1f}%  RR {pct[3]:5.1f}%"
        )
    else:
        if assessment.lateral_offset_m is not None:
            out.append(f"COG    centreline {assessment.lateral_offset_m:+.3f}m")
        else:
            out.append("COG    undefined (zero load)")
    out.extend(classify(assessment, policy))
    return "\n".join(out)
