"""Ground-state eigenvalues of the magnetic Dirichlet Laplacian on disks."""

from services.disk2d.disk_eigen import (
    DiskEigenQuery,
    DiskGroundStateAudit,
    disk_lambda1,
    disk_lambda1_asym,
    disk_lambda1_excess,
    disk_lambda1_l,
    ground_state_audit,
)

__all__ = [
    "DiskEigenQuery",
    "DiskGroundStateAudit",
    "disk_lambda1",
    "disk_lambda1_asym",
    "disk_lambda1_excess",
    "disk_lambda1_l",
    "ground_state_audit",
]
