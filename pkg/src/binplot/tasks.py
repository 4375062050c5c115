"""Analysis task catalog and the design-vs-task guidance matrix.

Sixteen tasks pair eight analysis goals with a bin-centric and a
class-centric scope.  The matrix rates how well each design serves
each task: '+' works well, 'o' partial or conditional support, '-'
unsupported.  Ratings are compiled from the design discussion; the
pie-chart cell for task 13 is '-/+' because the area-scaled variant
adds the density reading the plain pie lacks.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Task:
    number: int
    scope: str  # "bin" or "class"
    name: str


TASKS: tuple[Task, ...] = tuple(
    Task(number=i + 1, scope=("bin" if i % 2 == 0 else "class"), name=name)
    for i, name in enumerate(
        [
            "explore neighborhood",
            "explore neighborhood",
            "search motif",
            "search motif",
            "explore data",
            "explore data",
            "characterize distribution",
            "characterize distribution",
            "identify anomalies",
            "identify anomalies",
            "identify correlation",
            "identify correlation",
            "numerosity comparison",
            "numerosity comparison",
            "understand distances",
            "understand distances",
        ]
    )
)

# design -> ratings for tasks 1..16
DESIGN_TASK_MATRIX: dict[str, tuple[str, ...]] = {
    "juxtaposition":     ("-", "o", "-", "+", "-", "+", "-", "o", "-", "+", "-", "o", "-", "o", "-", "o"),
    "superimposition":   ("o", "+", "o", "o", "o", "o", "o", "+", "o", "o", "o", "o", "o", "+", "o", "o"),
    "luminance":         ("+", "o", "+", "-", "+", "o", "+", "o", "+", "o", "+", "-", "+", "-", "o", "-"),
    "majority color":    ("o", "-", "o", "-", "+", "+", "+", "+", "+", "+", "-", "-", "-", "-", "-", "-"),
    "color blending":    ("+", "-", "o", "-", "o", "-", "o", "+", "o", "-", "-", "-", "-", "-", "-", "-"),
    "color weaving":     ("o", "+", "o", "+", "o", "o", "+", "+", "+", "o", "-", "-", "o", "o", "-", "-"),
    "attribute blocks":  ("-", "o", "-", "o", "-", "+", "-", "+", "-", "o", "-", "+", "-", "o", "-", "+"),
    "hatching":          ("-", "o", "-", "o", "-", "+", "-", "+", "-", "+", "-", "o", "-", "o", "-", "o"),
    "pie charts":        ("o", "-", "+", "-", "+", "-", "+", "-", "+", "-", "o", "-", "-/+", "-", "-", "-"),
    "bar charts":        ("o", "o", "o", "o", "o", "o", "o", "o", "-", "-", "-", "o", "o", "+", "-", "o"),
    "point samples":     ("o", "o", "-", "-", "o", "o", "-", "-", "-", "-", "-", "+", "-", "-", "-", "+"),
}


def format_matrix() -> str:
    """Plain-text rendering of the matrix for the CLI."""
    lines = []
    lines.append("Analysis tasks (b = bin-centric, c = class-centric):")
    for task in TASKS:
        lines.append(f"  {task.number:>2} ({task.scope[0]})  {task.name}")
    lines.append("")
    header = "design            " + " ".join(f"{t.number:>3}" for t in TASKS)
    lines.append(header)
    lines.append("-" * len(header))
    for design, ratings in DESIGN_TASK_MATRIX.items():
        cells = " ".join(f"{r:>3}" for r in ratings)
        lines.append(f"{design:<18}{cells}")
    lines.append("")
    lines.append("+ works well   o partial/conditional   - unsupported")
    lines.append("task 13 pie cell: plain pie '-', area-scaled pie '+'")
    return "\n".join(lines)
