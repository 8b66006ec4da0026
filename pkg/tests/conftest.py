import os

# Pin BLAS to one thread before numpy loads: keeps timings stable and
# worker processes from oversubscribing the box.
for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
    os.environ.setdefault(_var, "1")
