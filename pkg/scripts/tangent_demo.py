"""Run the tangent construction for both intersection choices and check
the result numerically: the touch point lies on both circles and the
line's distance from the centre equals the radius."""
from __future__ import annotations

import sys

from basm import corpus_run
from basm.geometry import dist, dist_point_line


def main() -> int:
    for choice in (0, 1):
        trace = corpus_run("tangent", choice=choice)
        final = trace.final_state
        values = {
            loc.symbol.name: value
            for loc, value in final.interp.items()
            if loc.symbol.arity == 0
        }
        C, D, s, T = values["C"], values["D"], values["s"], values["T"]
        p = values["p"]
        print(f"choice {choice}: {len(trace.steps)} steps")
        print(f"  touch point s = ({s.x}, {s.y})")
        print(f"  |s - centre C| - r = {dist(s, C.center) - C.radius:+.3e}")
        print(f"  |s - centre D| - r = {dist(s, D.center) - D.radius:+.3e}")
        print(f"  dist(centre, T) - r = {dist_point_line(p, T) - C.radius:+.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
