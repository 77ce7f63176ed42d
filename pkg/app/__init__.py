# Multiscale compressible flow solver package
