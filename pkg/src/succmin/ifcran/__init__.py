"""Integer-forcing C-RAN rate optimization."""
