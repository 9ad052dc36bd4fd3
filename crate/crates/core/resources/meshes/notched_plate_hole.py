"""Generates notched_plate_hole.msh (gmsh >= 4.11, MSH 4.1 ASCII, quads)."""

import sys

import gmsh

WIDTH, HEIGHT = 65.0, 120.0
PIN_X, PIN_R = 20.0, 5.0
PIN_Y = (20.0, 100.0)
HOLE = (36.5, 51.0, 10.0)
NOTCH = (10.0, 65.0, 1.0)  # length, centre height, width
FINE, COARSE = 0.25, 3.0


def main(path):
    gmsh.initialize()
    gmsh.option.setNumber("General.Terminal", 0)
    gmsh.model.add("notched_plate_hole")
    occ = gmsh.model.occ
    plate = occ.addRectangle(0, 0, 0, WIDTH, HEIGHT)
    length, yc, w = NOTCH
    cuts = [
        (2, occ.addRectangle(-1.0, yc - 0.5 * w, 0, length + 1.0, w)),
        (2, occ.addDisk(HOLE[0], HOLE[1], 0, HOLE[2], HOLE[2])),
    ]
    cuts += [(2, occ.addDisk(PIN_X, y, 0, PIN_R, PIN_R)) for y in PIN_Y]
    occ.cut([(2, plate)], cuts)
    occ.synchronize()

    def curves_near(x, y, r):
        box = gmsh.model.getEntitiesInBoundingBox(x - r - 0.1, y - r - 0.1, -1, x + r + 0.1, y + r + 0.1, 1, 1)
        return [t for _, t in box]

    bottom, top = (curves_near(PIN_X, y, PIN_R) for y in PIN_Y)
    gmsh.model.addPhysicalGroup(1, bottom, name="bottom_pin")
    gmsh.model.addPhysicalGroup(1, top, name="top_pin")
    gmsh.model.addPhysicalGroup(1, curves_near(HOLE[0], HOLE[1], HOLE[2]), name="hole")
    surfaces = [t for _, t in gmsh.model.getEntities(2)]
    gmsh.model.addPhysicalGroup(2, surfaces, name="plate")

    # refinement band: notch tip to hole, around the hole, hole to right edge
    pts = [occ.addPoint(x, y, 0) for x, y in [(length, yc), (HOLE[0] - 6.0, HOLE[1] + 7.0), (HOLE[0] + HOLE[2], HOLE[1]), (WIDTH, HOLE[1])]]
    lines = [occ.addLine(pts[0], pts[1]), occ.addLine(pts[2], pts[3])]
    occ.synchronize()
    field = gmsh.model.mesh.field
    dist = field.add("Distance")
    field.setNumbers(dist, "CurvesList", lines + curves_near(HOLE[0], HOLE[1], HOLE[2]))
    field.setNumber(dist, "Sampling", 400)
    thr = field.add("Threshold")
    field.setNumber(thr, "InField", dist)
    field.setNumber(thr, "SizeMin", FINE)
    field.setNumber(thr, "SizeMax", COARSE)
    field.setNumber(thr, "DistMin", 4.0)
    field.setNumber(thr, "DistMax", 16.0)
    field.setAsBackgroundMesh(thr)
    gmsh.option.setNumber("Mesh.MeshSizeExtendFromBoundary", 0)
    gmsh.option.setNumber("Mesh.MeshSizeFromPoints", 0)
    gmsh.option.setNumber("Mesh.Algorithm", 8)
    gmsh.option.setNumber("Mesh.RecombineAll", 1)
    gmsh.option.setNumber("Mesh.RecombinationAlgorithm", 1)
    gmsh.option.setNumber("Mesh.MshFileVersion", 4.1)
    gmsh.option.setNumber("Mesh.SaveAll", 0)
    gmsh.model.mesh.generate(2)
    gmsh.write(path)
    gmsh.finalize()


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "notched_plate_hole.msh")
