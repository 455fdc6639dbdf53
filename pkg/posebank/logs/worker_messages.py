# info
MAP_ITEMS = 'Mapping %d items over %d threads.'
