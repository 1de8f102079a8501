from liouville_fbm._commands import (  # noqa: F401
    cylindrical,
    fbm_sample,
    frac_apply,
    heat,
    isometry,
    kernel_variance,
    norm_compare,
    threshold_scan,
)
