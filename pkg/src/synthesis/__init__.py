# Synthesis package
