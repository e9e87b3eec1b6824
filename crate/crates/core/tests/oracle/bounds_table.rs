// generated by bounds_oracle.py; do not edit
#![allow(clippy::excessive_precision, clippy::approx_constant)]
pub const C0: f64 = 950.08796670841080445;
pub const CONSTANTS: [f64; 4] = [0.0021050682358698004155, 1.8020946972746049567, 0.79788456080286535588, 3.3936536824085960676];
pub const VALUES: &[(&str, &[f64], f64)] = &[
    ("sufficient_m", &[1.0000000000000000000, 0.25000000000000000000, 2.0000000000000000000, 0.10000000000000000000], 78135.150237997458054),
    ("sufficient_m", &[1.0000000000000000000, 0.50000000000000000000, 2.0000000000000000000, 0.10000000000000000000], 33799.168755735799972),
    ("sufficient_m", &[1.0000000000000000000, 0.10000000000000000000, 3.0000000000000000000, 0.050000000000000000000], 346958.21802812718785),
    ("sufficient_m", &[2.0000000000000000000, 0.30000000000000000000, 5.0000000000000000000, 0.010000000000000000000], 366783.00260618184155),
    ("sufficient_m", &[0.50000000000000000000, 1.0000000000000000000, 10.000000000000000000, 0.50000000000000000000], 28510.010105546056956),
    ("sufficient_m", &[1.0000000000000000000, 2.0000000000000000000, 1.0000000000000000000, 0.90000000000000000000], 2260.4870314937342089),
    ("lower_bound_m", &[1.0000000000000000000, 0.10000000000000000000, 3.0000000000000000000], 22.072766470286539296),
    ("lower_bound_m", &[1.0000000000000000000, 1.0000000000000000000, 2.0000000000000000000], 1.4715177646857692864),
    ("lower_bound_m", &[2.0000000000000000000, 0.25000000000000000000, 7.0000000000000000000], 41.202497411201540019),
    ("lower_bound_m", &[0.30000000000000000000, 0.60000000000000000000, 1.0000000000000000000], 0.36787944117144232160),
    ("kappa_n", &[0.0, 1.0000000000000000000, 2.0000000000000000000, 0.0], 0.0),
    ("kappa_n", &[1.0000000000000000000, 1.0000000000000000000, 2.0000000000000000000, 0.50000000000000000000], 0.35355339059327376220),
    ("kappa_n", &[0.010000000000000000000, 1.0000000000000000000, 3.0000000000000000000, 0.0], 0.12156613477096616713),
    ("kappa_n", &[0.010000000000000000000, 1.0000000000000000000, 3.0000000000000000000, 0.70000000000000000000], 0.12156613477096616713),
    ("kappa_n", &[0.20000000000000000000, 2.0000000000000000000, 3.0000000000000000000, 1.5000000000000000000], 0.26413527189768714469),
    ("kappa_n", &[0.50000000000000000000, 1.0000000000000000000, 4.0000000000000000000, 0.0], 0.70710678118654752440),
    ("kappa_n", &[0.050000000000000000000, 1.0000000000000000000, 4.0000000000000000000, 1.0000000000000000000], 0.17960530202677490071),
    ("kappa_n", &[0.30000000000000000000, 1.0000000000000000000, 8.0000000000000000000, 0.40000000000000000000], 0.69006555934235421780),
    ("kappa_n", &[0.0010000000000000000000, 0.50000000000000000000, 20.000000000000000000, 0.25000000000000000000], 0.16116459280507605969),
    ("zeta_of_m", &[1000.0000000000000000, 5.0000000000000000000, 0.050000000000000000000], 0.16229527817916552840),
    ("zeta_of_m", &[282.00000000000000000, 3.0000000000000000000, 0.10000000000000000000], 0.22515781998591560107),
    ("zeta_of_m", &[1000000.0000000000000, 2.0000000000000000000, 0.010000000000000000000], 0.0043994364410836141929),
    ("zeta_of_m", &[1.0000000000000000000, 1.0000000000000000000, 0.50000000000000000000], 1.4623040243082242354),
    ("embedding_m", &[0.10000000000000000000, 3.0000000000000000000, 0.10000000000000000000], 1335.0000000000000000),
    ("embedding_m", &[0.20000000000000000000, 3.0000000000000000000, 0.10000000000000000000], 282.00000000000000000),
    ("embedding_m", &[0.050000000000000000000, 5.0000000000000000000, 0.010000000000000000000], 10858.000000000000000),
    ("embedding_m", &[0.50000000000000000000, 1.0000000000000000000, 0.50000000000000000000], 10.000000000000000000),
    ("error_bound_flips", &[0.050000000000000000000, 1000.0000000000000000, 5.0000000000000000000, 0.10000000000000000000, 1.0000000000000000000], 185.52412689199034560),
    ("error_bound_flips", &[0.0, 1000.0000000000000000, 5.0000000000000000000, 0.10000000000000000000, 1.0000000000000000000], 138.01972855656980538),
    ("error_bound_flips", &[0.10000000000000000000, 5000.0000000000000000, 3.0000000000000000000, 0.050000000000000000000, 2.0000000000000000000], 295.43864295594752826),
    ("error_bound_gaussian", &[0.010000000000000000000, 1000.0000000000000000, 5.0000000000000000000, 0.10000000000000000000, 1.0000000000000000000], 304.36040206648588905),
    ("error_bound_gaussian", &[0.0, 1000.0000000000000000, 5.0000000000000000000, 0.10000000000000000000, 1.0000000000000000000], 154.13830445064556914),
    ("error_bound_gaussian", &[0.20000000000000000000, 20000.000000000000000, 2.0000000000000000000, 0.010000000000000000000, 3.0000000000000000000], 511.54843389950698975),
    ("error_bound_arbitrary", &[0.10000000000000000000, 500.00000000000000000, 3.0000000000000000000, 0.10000000000000000000, 1.0000000000000000000], 786.19228341179357969),
    ("error_bound_arbitrary", &[0.0, 500.00000000000000000, 3.0000000000000000000, 0.10000000000000000000, 1.0000000000000000000], 710.38623140767080804),
    ("error_bound_arbitrary", &[0.40000000000000000000, 10000.000000000000000, 6.0000000000000000000, 0.20000000000000000000, 2.0000000000000000000], 802.65181114315089057),
    ("adaptive_m", &[1.0000000000000000000, 0.031250000000000000000, 3.0000000000000000000, 0.10000000000000000000, 950.08796670841080445], 68747.738984540943230),
    ("adaptive_m", &[1.0000000000000000000, 1.0000000000000000000, 3.0000000000000000000, 0.10000000000000000000, 950.08796670841080445], 11457.956497423490538),
    ("adaptive_m", &[2.0000000000000000000, 0.10000000000000000000, 5.0000000000000000000, 0.050000000000000000000, 100.00000000000000000], 11160.150225971444542),
];
pub const INTEGERS: &[(&str, &[f64], u64)] = &[
    ("sufficient_m", &[1.0000000000000000000, 0.25000000000000000000, 2.0000000000000000000, 0.10000000000000000000], 78136),
    ("sufficient_m", &[1.0000000000000000000, 0.50000000000000000000, 2.0000000000000000000, 0.10000000000000000000], 33800),
    ("sufficient_m", &[1.0000000000000000000, 0.10000000000000000000, 3.0000000000000000000, 0.050000000000000000000], 346959),
    ("adaptive_m", &[1.0000000000000000000, 0.031250000000000000000, 3.0000000000000000000, 0.10000000000000000000], 68748),
    ("adaptive_m", &[1.0000000000000000000, 1.0000000000000000000, 3.0000000000000000000, 0.10000000000000000000], 11458),
];
pub const CELLS: &[(u64, u32, &str)] = &[
    (3, 1, "4"),
    (3, 2, "7"),
    (60, 6, "56049058"),
    (100, 5, "79375496"),
    (1000, 2, "500501"),
    (10000, 6, "1387639652673653339501"),
    (10000, 10, "2746103379116181367002898500032251"),
    (5, 9, "32"),
];
