# commands/__init__.py
from commands import slopes, higgs_check, dieudonne, families, reduce, sweep, emit

ALL = [slopes, higgs_check, dieudonne, families, reduce, sweep, emit]
