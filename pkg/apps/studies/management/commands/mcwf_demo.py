"""
Management command: run a quantum-jump ensemble next to the deterministic master equation.

Usage:
    python manage.py mcwf_demo --config runs/mcwf_demo.cfg --out output/mcwf_demo
    python manage.py mcwf_demo --set n_traj=10000 --seed 7 --enqueue
"""
from apps.studies.commands import StudyCommand
from apps.studies.config import Subcommand


class Command(StudyCommand):
    help = 'Run a quantum-jump ensemble next to the deterministic master equation'
    subcommand = Subcommand.MCWF_DEMO
