# info
WRITE_PLOT = 'Writing plot %s ...'
WRITE_PREVIEWS = 'Wrote %d feature previews to %s.'
