"""
Management command for the Ohmic dephasing threshold scan.

Usage:
    python manage.py dephasing_scan --config runs/dephasing_scan.cfg --out output/dephasing_scan
    python manage.py dephasing_scan --set T=0,100 --set s_step=0.1
"""
from apps.studies.commands import StudyCommand
from apps.studies.config import Subcommand


class Command(StudyCommand):
    help = 'Scan Ohmicity and temperature for dephasing rate sign, trace-distance measure and xi convexity'
    subcommand = Subcommand.DEPHASING_SCAN
