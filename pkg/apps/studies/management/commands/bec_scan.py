"""
Management command to locate the Markovian crossover of a condensate reservoir.

Usage:
    python manage.py bec_scan --config runs/bec_scan.cfg --out output/bec_scan
    python manage.py bec_scan --set dimension=1 --set T=50e-9 --threads 4
"""
from apps.studies.commands import StudyCommand
from apps.studies.config import Subcommand


class Command(StudyCommand):
    help = 'Scan the boson scattering length of a condensate reservoir and locate the Markovian crossover'
    subcommand = Subcommand.BEC_SCAN
