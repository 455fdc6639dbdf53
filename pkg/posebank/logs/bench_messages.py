# info
BENCH_ROW = 'Timed %s on %s: median %.4fs.'
ORACLE_CASE = 'Oracle case %d: truth (%.4f, %.2f deg), recovered (%.4f, %.2f deg), agree=%s.'
ORACLE_DONE = 'Registration agrees with exhaustive search on %.1f%% of cases, speedup %.1fx.'
