# info
BUILD_BANK = 'Building pose bank over a %d x %d grid at %dx%d ...'
BANK_READY = 'Pose bank with %d templates ready in %.2fs.'
SCORE_BANK = 'Scoring query against %d templates ...'
ESTIMATE = 'Best bin %d (mse %.6g) at theta=%.4f phi=%.4f.'

# warning
ZERO_ENERGY_FALLBACK = 'Template %d or query has zero energy; comparing without registration.'
REGISTRATION_FALLBACK = 'Registration failed for template %d (%s); using identity.'

# error
DIMENSION_MISMATCH = 'Query shape %s does not match bank templates %s.'
NON_FINITE_QUERY = 'Query contains %d NaN or infinite values.'
BAD_TEMPERATURE = 'Invalid temperature %r.'
BAD_ITERATION = 'Invalid ramp iteration %d.'
BAD_ERRORS = 'Match errors contain NaN or infinite values.'
