# Gadgets package
