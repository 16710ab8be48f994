//! Published maxima of the Björck ambiguity function off the origin,
//! rounded to six decimals, alongside `2/√p`.

/// `(p, max |A(u_p)| off (0,0), 2/√p)`.
pub const PUBLISHED_MAXIMA: &[(u64, f64, f64)] = &[
    (3, 1.0, 1.15470),
    (5, 1.0, 0.894427),
    (7, 0.599074, 0.755929),
    (11, 0.572765, 0.603023),
    (13, 0.570127, 0.554700),
    (17, 0.544798, 0.485071),
    (19, 0.388357, 0.458831),
    (23, 0.365960, 0.417029),
    (29, 0.312280, 0.371391),
    (101, 0.208395, 0.199007),
    (103, 0.187876, 0.197066),
    (107, 0.192309, 0.193347),
    (109, 0.212120, 0.191565),
    (113, 0.191960, 0.188144),
    (127, 0.171881, 0.177471),
    (131, 0.170530, 0.174741),
    (137, 0.159752, 0.170872),
    (139, 0.171326, 0.169638),
    (149, 0.157303, 0.163846),
    (151, 0.149263, 0.162758),
    (157, 0.157840, 0.159617),
    (163, 0.154913, 0.156652),
    (167, 0.152243, 0.154765),
    (173, 0.152966, 0.152057),
    (179, 0.143966, 0.149487),
    (181, 0.154193, 0.148659),
    (191, 0.139244, 0.144715),
    (193, 0.151468, 0.143963),
    (197, 0.151479, 0.142494),
    (199, 0.138516, 0.141776),
    (1009, 0.065505, 0.062963),
    (1013, 0.064300, 0.062838),
    (1019, 0.060996, 0.062653),
    (1021, 0.063567, 0.062592),
    (1031, 0.061432, 0.062287),
    (1033, 0.062460, 0.062227),
    (1039, 0.061420, 0.062047),
    (1049, 0.063469, 0.061751),
    (1051, 0.060041, 0.061692),
    (1061, 0.063533, 0.061401),
    (1063, 0.060180, 0.061343),
    (1069, 0.062845, 0.061170),
    (1087, 0.059183, 0.060662),
    (1091, 0.059923, 0.060550),
    (1093, 0.060828, 0.060495),
    (1097, 0.063115, 0.060385),
    (1103, 0.059840, 0.060220),
    (1109, 0.061014, 0.060057),
    (1117, 0.062083, 0.059842),
    (1123, 0.058489, 0.059682),
    (1129, 0.062178, 0.059523),
    (1151, 0.058290, 0.058951),
    (1153, 0.061266, 0.058900),
    (1163, 0.058550, 0.058646),
    (1171, 0.056711, 0.058446),
    (1181, 0.059624, 0.058198),
    (1187, 0.057459, 0.058050),
    (1193, 0.059935, 0.057904),
    (1201, 0.057850, 0.057711),
    (1213, 0.058716, 0.057425),
];

/// Primes p ≡ 3 mod 4 whose maximum exceeds `2/√p`, by range.
pub const EXCEEDANCES_100_200: &[u64] = &[139];
pub const EXCEEDANCES_1000_5000: &[u64] = &[1259, 2111, 3511];
pub const EXCEEDANCES_10000_24360: &[u64] = &[13879, 16091, 23719];

pub fn published_primes() -> impl Iterator<Item = u64> {
    PUBLISHED_MAXIMA.iter().map(|&(p, _, _)| p)
}

pub fn published_max(p: u64) -> Option<f64> {
    PUBLISHED_MAXIMA.iter().find(|&&(q, _, _)| q == p).map(|&(_, m, _)| m)
}
