"""Generates senb_qualitative.msh (gmsh >= 4.11, MSH 4.1 ASCII, quads)."""

import sys

import gmsh

LENGTH, HEIGHT = 440.0, 100.0
NOTCH = (220.0, 5.0, 20.0)  # centre, width, depth from the top edge
FINE, COARSE = 1.25, 10.0


def main(path):
    gmsh.initialize()
    gmsh.option.setNumber("General.Terminal", 0)
    gmsh.model.add("senb_qualitative")
    occ = gmsh.model.occ
    beam = occ.addRectangle(0, 0, 0, LENGTH, HEIGHT)
    xc, w, depth = NOTCH
    notch = occ.addRectangle(xc - 0.5 * w, HEIGHT - depth, 0, w, depth + 1.0)
    occ.cut([(2, beam)], [(2, notch)])
    occ.synchronize()
    surfaces = [t for _, t in gmsh.model.getEntities(2)]
    gmsh.model.addPhysicalGroup(2, surfaces, name="beam")

    # refinement band: notch root down to the inner support
    pts = [occ.addPoint(x, y, 0) for x, y in [(xc - 10.0, HEIGHT - depth), (xc + 10.0, HEIGHT - depth), (250.0, 0.0)]]
    lines = [occ.addLine(pts[0], pts[1]), occ.addLine(pts[1], pts[2])]
    occ.synchronize()
    field = gmsh.model.mesh.field
    dist = field.add("Distance")
    field.setNumbers(dist, "CurvesList", lines)
    field.setNumber(dist, "Sampling", 400)
    thr = field.add("Threshold")
    field.setNumber(thr, "InField", dist)
    field.setNumber(thr, "SizeMin", FINE)
    field.setNumber(thr, "SizeMax", COARSE)
    field.setNumber(thr, "DistMin", 12.0)
    field.setNumber(thr, "DistMax", 40.0)
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
    main(sys.argv[1] if len(sys.argv) > 1 else "senb_qualitative.msh")
