# File formats
