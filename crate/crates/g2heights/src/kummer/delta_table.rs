// Duplication forms on the Kummer surface. Each row is (coefficient, [a2,a3,a4,a5] exponents, [k1,k2,k3,k4] exponents).
// Generated once from the published polynomials; guarded by the checksum test in `kummer`.

pub(crate) type Monomial = (i64, [u8; 4], [u8; 4]);

pub(crate) const DELTA1: &[Monomial] = &[
    (4, [2, 0, 0, 1], [4, 0, 0, 0]),
    (8, [0, 0, 2, 0], [3, 1, 0, 0]),
    (-32, [0, 1, 0, 1], [3, 1, 0, 0]),
    (-8, [1, 0, 0, 1], [2, 2, 0, 0]),
    (4, [0, 0, 0, 1], [0, 4, 0, 0]),
    (-16, [1, 0, 0, 1], [3, 0, 1, 0]),
    (-4, [1, 0, 1, 0], [2, 1, 1, 0]),
    (-16, [0, 0, 0, 1], [1, 2, 1, 0]),
    (4, [0, 0, 1, 0], [0, 3, 1, 0]),
    (16, [0, 0, 0, 1], [2, 0, 2, 0]),
    (-8, [0, 0, 1, 0], [1, 1, 2, 0]),
    (4, [0, 1, 0, 0], [0, 2, 2, 0]),
    (4, [1, 0, 0, 0], [0, 1, 3, 0]),
    (4, [1, 0, 1, 0], [3, 0, 0, 1]),
    (-32, [0, 0, 0, 1], [2, 1, 0, 1]),
    (-4, [0, 0, 1, 0], [1, 2, 0, 1]),
    (-8, [0, 0, 1, 0], [2, 0, 1, 1]),
    (-8, [0, 1, 0, 0], [1, 1, 1, 1]),
    (-4, [1, 0, 0, 0], [1, 0, 2, 1]),
    (8, [0, 0, 0, 0], [0, 0, 3, 1]),
    (4, [0, 1, 0, 0], [2, 0, 0, 2]),
    (-4, [0, 0, 0, 0], [0, 1, 1, 2]),
    (4, [0, 0, 0, 0], [1, 0, 0, 3]),
];

pub(crate) const DELTA2: &[Monomial] = &[
    (1, [1, 0, 2, 0], [4, 0, 0, 0]),
    (-4, [1, 1, 0, 1], [4, 0, 0, 0]),
    (16, [0, 0, 0, 2], [4, 0, 0, 0]),
    (-4, [2, 0, 0, 1], [3, 1, 0, 0]),
    (16, [0, 0, 1, 1], [3, 1, 0, 0]),
    (4, [0, 0, 2, 0], [2, 2, 0, 0]),
    (-4, [1, 0, 0, 1], [1, 3, 0, 0]),
    (-6, [2, 0, 1, 0], [3, 0, 1, 0]),
    (16, [0, 0, 2, 0], [3, 0, 1, 0]),
    (-32, [0, 1, 0, 1], [3, 0, 1, 0]),
    (16, [0, 1, 1, 0], [2, 1, 1, 0]),
    (-20, [1, 0, 0, 1], [2, 1, 1, 0]),
    (-8, [1, 0, 1, 0], [1, 2, 1, 0]),
    (8, [0, 0, 0, 1], [0, 3, 1, 0]),
    (5, [3, 0, 0, 0], [2, 0, 2, 0]),
    (16, [0, 2, 0, 0], [2, 0, 2, 0]),
    (-14, [1, 0, 1, 0], [2, 0, 2, 0]),
    (-12, [1, 1, 0, 0], [1, 1, 2, 0]),
    (32, [0, 0, 0, 1], [1, 1, 2, 0]),
    (4, [0, 0, 1, 0], [0, 2, 2, 0]),
    (-6, [2, 0, 0, 0], [1, 0, 3, 0]),
    (16, [0, 0, 1, 0], [1, 0, 3, 0]),
    (1, [1, 0, 0, 0], [0, 0, 4, 0]),
    (4, [1, 0, 0, 1], [3, 0, 0, 1]),
    (2, [1, 0, 1, 0], [2, 1, 0, 1]),
    (8, [0, 0, 0, 1], [1, 2, 0, 1]),
    (4, [0, 0, 1, 0], [0, 3, 0, 1]),
    (-12, [1, 1, 0, 0], [2, 0, 1, 1]),
    (-16, [0, 0, 0, 1], [2, 0, 1, 1]),
    (-10, [2, 0, 0, 0], [1, 1, 1, 1]),
    (16, [0, 0, 1, 0], [1, 1, 1, 1]),
    (8, [0, 1, 0, 0], [0, 2, 1, 1]),
    (16, [0, 1, 0, 0], [1, 0, 2, 1]),
    (2, [1, 0, 0, 0], [0, 1, 2, 1]),
    (4, [0, 0, 1, 0], [2, 0, 0, 2]),
    (8, [0, 1, 0, 0], [1, 1, 0, 2]),
    (5, [1, 0, 0, 0], [0, 2, 0, 2]),
    (-8, [1, 0, 0, 0], [1, 0, 1, 2]),
    (4, [0, 0, 0, 0], [0, 0, 2, 2]),
    (4, [0, 0, 0, 0], [0, 1, 0, 3]),
];

pub(crate) const DELTA3: &[Monomial] = &[
    (4, [0, 1, 2, 0], [4, 0, 0, 0]),
    (-16, [0, 2, 0, 1], [4, 0, 0, 0]),
    (8, [1, 0, 1, 1], [4, 0, 0, 0]),
    (4, [1, 0, 2, 0], [3, 1, 0, 0]),
    (-16, [1, 1, 0, 1], [3, 1, 0, 0]),
    (-32, [0, 0, 0, 2], [3, 1, 0, 0]),
    (-8, [0, 0, 1, 1], [2, 2, 0, 0]),
    (4, [0, 0, 2, 0], [1, 3, 0, 0]),
    (-16, [0, 1, 0, 1], [1, 3, 0, 0]),
    (-8, [2, 0, 0, 1], [3, 0, 1, 0]),
    (-16, [0, 0, 1, 1], [3, 0, 1, 0]),
    (-8, [0, 0, 2, 0], [2, 1, 1, 0]),
    (-24, [1, 0, 0, 1], [1, 2, 1, 0]),
    (-8, [0, 1, 1, 0], [2, 0, 2, 0]),
    (24, [1, 0, 0, 1], [2, 0, 2, 0]),
    (-4, [1, 0, 1, 0], [1, 1, 2, 0]),
    (12, [0, 0, 0, 1], [0, 2, 2, 0]),
    (-16, [0, 0, 0, 1], [1, 0, 3, 0]),
    (8, [0, 0, 1, 0], [0, 1, 3, 0]),
    (4, [0, 1, 0, 0], [0, 0, 4, 0]),
    (8, [0, 0, 2, 0], [3, 0, 0, 1]),
    (-32, [0, 1, 0, 1], [3, 0, 0, 1]),
    (-24, [1, 0, 0, 1], [2, 1, 0, 1]),
    (-8, [0, 0, 0, 1], [0, 3, 0, 1]),
    (-4, [1, 0, 1, 0], [2, 0, 1, 1]),
    (-24, [0, 0, 0, 1], [1, 1, 1, 1]),
    (-4, [0, 0, 1, 0], [0, 2, 1, 1]),
    (-8, [0, 0, 1, 0], [1, 0, 2, 1]),
    (4, [1, 0, 0, 0], [0, 0, 3, 1]),
    (-12, [0, 0, 0, 1], [2, 0, 0, 2]),
    (-4, [0, 0, 1, 0], [1, 1, 0, 2]),
    (4, [0, 0, 0, 0], [0, 0, 1, 3]),
];

pub(crate) const DELTA4: &[Monomial] = &[
    (1, [2, 0, 2, 0], [4, 0, 0, 0]),
    (-2, [0, 0, 3, 0], [4, 0, 0, 0]),
    (-4, [2, 1, 0, 1], [4, 0, 0, 0]),
    (8, [0, 1, 1, 1], [4, 0, 0, 0]),
    (-16, [1, 0, 0, 2], [4, 0, 0, 0]),
    (-8, [0, 1, 2, 0], [3, 1, 0, 0]),
    (32, [0, 2, 0, 1], [3, 1, 0, 0]),
    (-16, [1, 0, 1, 1], [3, 1, 0, 0]),
    (-2, [1, 0, 2, 0], [2, 2, 0, 0]),
    (8, [1, 1, 0, 1], [2, 2, 0, 0]),
    (16, [0, 0, 0, 2], [2, 2, 0, 0]),
    (1, [0, 0, 2, 0], [0, 4, 0, 0]),
    (-4, [0, 1, 0, 1], [0, 4, 0, 0]),
    (-4, [1, 0, 2, 0], [3, 0, 1, 0]),
    (16, [1, 1, 0, 1], [3, 0, 1, 0]),
    (32, [0, 0, 0, 2], [3, 0, 1, 0]),
    (8, [2, 0, 0, 1], [2, 1, 1, 0]),
    (16, [0, 0, 1, 1], [2, 1, 1, 0]),
    (-8, [1, 0, 0, 1], [0, 3, 1, 0]),
    (12, [0, 0, 2, 0], [2, 0, 2, 0]),
    (-32, [0, 1, 0, 1], [2, 0, 2, 0]),
    (-8, [1, 0, 0, 1], [1, 1, 2, 0]),
    (-2, [1, 0, 1, 0], [0, 2, 2, 0]),
    (-4, [1, 0, 1, 0], [1, 0, 3, 0]),
    (-8, [0, 0, 0, 1], [0, 1, 3, 0]),
    (1, [2, 0, 0, 0], [0, 0, 4, 0]),
    (-2, [0, 0, 1, 0], [0, 0, 4, 0]),
    (-8, [2, 0, 0, 1], [3, 0, 0, 1]),
    (-12, [0, 0, 2, 0], [2, 1, 0, 1]),
    (48, [0, 1, 0, 1], [2, 1, 0, 1]),
    (8, [1, 0, 0, 1], [1, 2, 0, 1]),
    (16, [1, 0, 0, 1], [2, 0, 1, 1]),
    (4, [1, 0, 1, 0], [1, 1, 1, 1]),
    (-16, [0, 0, 0, 1], [0, 2, 1, 1]),
    (-8, [0, 0, 0, 1], [1, 0, 2, 1]),
    (-12, [0, 0, 1, 0], [0, 1, 2, 1]),
    (-8, [0, 1, 0, 0], [0, 0, 3, 1]),
    (-2, [1, 0, 1, 0], [2, 0, 0, 2]),
    (8, [0, 0, 0, 1], [1, 1, 0, 2]),
    (-2, [1, 0, 0, 0], [0, 0, 2, 2]),
    (1, [0, 0, 0, 0], [0, 0, 0, 4]),
];

pub(crate) const DELTA: [&[Monomial]; 4] = [DELTA1, DELTA2, DELTA3, DELTA4];
