"""Iteration state machine, duty assignment, and project persistence."""
from .assignment import AssignmentPlan, build_assignment_plan
from .project import STAGES, AuditEvent, Iteration, Project
from .store import ProjectStore, init_project_dir

__all__ = [
    "STAGES",
    "AssignmentPlan",
    "AuditEvent",
    "Iteration",
    "Project",
    "ProjectStore",
    "build_assignment_plan",
    "init_project_dir",
]
