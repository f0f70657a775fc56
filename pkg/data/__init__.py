"""Persistence of run artifacts: shapes, results, trajectories, CSV tables and meshes."""
