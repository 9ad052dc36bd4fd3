"""Writes the graded grid lines of the desk-scale three-point bending beam."""

import sys

WIDTH, HEIGHT = 10.0, 2.0
NY = 100
BAND = 0.2
OUTER = 0.25
GRADED_CELLS = 22


def grade(a, b, h0, h1, n):
    r = (h1 / h0) ** (1.0 / (n - 1))
    sizes = [h0 * r**i for i in range(n)]
    total = sum(sizes)
    xs = [a]
    for h in sizes:
        xs.append(xs[-1] + h * (b - a) / total)
    xs[-1] = b
    return xs


def main():
    h = HEIGHT / NY
    nb = round(2.0 * BAND / h)
    mid = WIDTH / 2.0
    right = grade(mid + BAND, WIDTH, h, OUTER, GRADED_CELLS)
    centre = [mid - BAND + 2.0 * BAND * i / nb for i in range(nb + 1)]
    left = [WIDTH - x for x in reversed(right)]
    xs = left[:-1] + centre[:-1] + right
    ys = [HEIGHT * j / NY for j in range(NY + 1)]
    fmt = lambda v: "[" + ", ".join(repr(round(x, 12)) for x in v) + "]"
    sys.stdout.write(f"x = {fmt(xs)}\ny = {fmt(ys)}\n")


if __name__ == "__main__":
    main()
