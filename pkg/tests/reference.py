"""Published reference values: (R, Q*) per (s, L), four decimals."""

_R = {
    2: (0.2075, 0.2457, 0.2635, 0.2744, 0.2819, 0.2874),
    3: (0.0800, 0.1153, 0.1348, 0.1470, 0.1552, 0.1611),
    4: (0.0439, 0.0684, 0.0838, 0.0941, 0.1014, 0.1068),
    5: (0.0279, 0.0456, 0.0575, 0.0660, 0.0723, 0.0771),
    6: (0.0194, 0.0325, 0.0420, 0.0490, 0.0544, 0.0587),
}
_Q = {
    2: (0.5000, 0.2764, 0.2432, 0.2297, 0.2228, 0.2180),
    3: (0.2000, 0.1794, 0.1686, 0.1613, 0.1561, 0.1524),
    4: (0.1479, 0.1391, 0.1326, 0.1275, 0.1234, 0.1201),
    5: (0.1209, 0.1150, 0.1103, 0.1064, 0.1030, 0.1003),
    6: (0.1027, 0.0983, 0.0947, 0.0915, 0.0889, 0.0865),
}

RATE_TABLE = {(s, L): (_R[s][L - 1], _Q[s][L - 1]) for s in _R for L in range(1, 7)}
