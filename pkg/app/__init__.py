# Surface lattice workbench
