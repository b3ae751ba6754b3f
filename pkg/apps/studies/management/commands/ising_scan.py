"""
Management command: scan chain length and renormalized field of the Ising probe.

Usage:
    python manage.py ising_scan --config runs/ising_scan.cfg --out output/ising_scan
    python manage.py ising_scan --set N=50,100,200 --set write_echoes=true
"""
from apps.studies.commands import StudyCommand
from apps.studies.config import Subcommand


class Command(StudyCommand):
    help = 'Scan chain length and renormalized field of the Ising probe'
    subcommand = Subcommand.ISING_SCAN
