"""Process-wide work caps.

All caps can be overridden from the command line with ``--budget KEY=VALUE``.
"""

DEFAULTS = {
    "group_order": 10**6,        # enumerating elements / classes
    "low_index": 400,             # max index for low_index_subgroups
    "rws_rules": 20000,
    "module_closure_dim": 200,   # Burnside-Brauer tensor closure
    "h2_elements": 2**20,        # orbit enumeration on H^2
    "normal_subgroups": 20000,
    "aut_order": 10**6,
    "fingerprint_aut_order": 1500,   # only compute |Aut| up to this group order
    "fingerprint_low_index": 16,
    "perm_index_start": 20,
    "perm_index_max": 320,
    "block_points": 10**6,
}

_caps = dict(DEFAULTS)


def get(key):
    return _caps[key]


def set_cap(key, value):
    if key not in DEFAULTS:
        raise KeyError(f"unknown budget key {key!r}")
    _caps[key] = int(value)


def reset():
    _caps.clear()
    _caps.update(DEFAULTS)


def snapshot():
    return dict(_caps)
