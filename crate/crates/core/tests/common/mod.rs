//! Reference values shared by the oracle and acceptance suites.
//!
//! Bessel values were computed with a 50-digit power series (500 terms) and
//! frozen here.

#![allow(dead_code, clippy::excessive_precision, clippy::approx_constant)]

pub const BESSEL_Z: [f64; 5] = [0.1, 1.0, 10.0, 100.0, 700.0];

/// `(order, [log I_order(z) for z in BESSEL_Z])`.
pub const LOG_BESSEL: [(f64, [f64; 5]); 13] = [
    (
        0.0,
        [
            0.002498439233876243658,
            0.2359143585071786487,
            7.942972083118695554,
            96.77973268994258372,
            695.8056999984434491,
        ],
    ),
    (
        1.0,
        [
            -2.994482533862204884,
            -0.5706479874908312814,
            7.890203834104212294,
            96.77470745759144846,
            695.8049852018556523,
        ],
    ),
    (
        2.0,
        [
            -6.683778481120864557,
            -1.996957485935767333,
            7.732596714041425199,
            96.75963227590302710,
            695.8028408135562567,
        ],
    ),
    (
        3.0,
        [
            -10.77833132894710341,
            -3.809086303239422500,
            7.472148617148627500,
            96.73450869049096059,
            695.7992668379372190,
        ],
    ),
    (
        4.5,
        [
            -17.43815466904904361,
            -7.031679395484457789,
            6.895538875684949127,
            96.67798846767693331,
            695.7912254150970394,
        ],
    ),
    (
        5.0,
        [
            -19.76573645628526658,
            -8.211684133298291145,
            6.655682645855045358,
            96.65412763258008145,
            695.7878301569473150,
        ],
    ),
    (
        5.5,
        [
            -22.13870495888081430,
            -9.436508043413119654,
            6.392884239592816365,
            96.62775738041347163,
            695.7840775096075814,
        ],
    ),
    (
        6.0,
        [
            -24.55328771844842077,
            -10.70249931012048459,
            6.107695826871999196,
            96.59887838478603611,
            695.7799674749991732,
        ],
    ),
    (
        6.5,
        [
            -27.00629068806198267,
            -12.00655263261703663,
            5.800674720601236092,
            96.56749138283035653,
            695.7755000552263739,
        ],
    ),
    (
        7.0,
        [
            -29.49497478136847204,
            -13.34599565362448025,
            5.472378166951772564,
            96.53359717503207914,
            695.7706752525764059,
        ],
    ),
    (
        9.0,
        [
            -39.76316794490821823,
            -19.01518043558625816,
            3.957365184572097761,
            96.37296650172940925,
            695.7478022653515413,
        ],
    ),
    (
        10.0,
        [
            -45.06150803804030564,
            -22.01317857797304179,
            3.086107851106968870,
            96.27763336565393818,
            695.7342215473879745,
        ],
    ),
    (
        11.0,
        [
            -50.45515452330375731,
            -25.10611015904155846,
            2.144278476426265782,
            96.17230090758928032,
            695.7192113826259785,
        ],
    ),
];

pub const BESSEL_Z_LARGE: [f64; 3] = [800.0, 1500.0, 5000.0];

pub const LOG_BESSEL_LARGE: [(f64, [f64; 3]); 5] = [
    (
        0.0,
        [
            795.738911950745018783,
            1495.424534634380598,
            4994.822489873587730,
        ],
    ),
    (
        0.5,
        [
            795.738755602961364,
            1495.424451273250177,
            4994.822464871087209,
        ],
    ),
    (
        2.0,
        [
            795.736410387431831,
            1495.423200856479413,
            4994.822089833584397,
        ],
    ),
    (
        59.0,
        [
            793.562913546067185,
            1494.263964070752506,
            4994.474359097419388,
        ],
    ),
    (
        100.0,
        [
            789.493130849476749,
            1492.091324778231918,
            4993.822423201254277,
        ],
    ),
];

/// Matched `γ` at `α = 0.05` for large degrees of freedom.
pub const MATCHED_GAMMA_05: [(u32, f64); 5] = [
    (6, 3.4580073),
    (116, 3.6699605),
    (117, 3.6705570),
    (119, 3.6717321),
    (120, 3.6723109),
];

/// `log Γ(x)` to 22 digits.
pub const LOG_GAMMA: [(f64, f64); 22] = [
    (0.1, 2.252712651734205902006),
    (0.5, 0.5723649429247000870717),
    (1.0, 0.0),
    (1.5, -0.1207822376352452223455),
    (2.5, 0.2846828704729191596325),
    (3.0, 0.6931471805599453094172),
    (5.5, 3.957813967618716293877),
    (7.3, 7.147892523022248692104),
    (10.0, 12.80182748008146961121),
    (15.5, 26.53691449111561362395),
    (20.0, 39.33988418719949403622),
    (25.0, 54.7847293981123191900933),
    (30.0, 71.25703896716800901007),
    (38.0, 99.33061245478742692933),
    (39.0, 102.9681986145138126988),
    (50.0, 144.5657439463448860089),
    (60.5, 186.5789178333378528681),
    (100.0, 359.134205369575398776),
    (171.3, 708.114947038996882729),
    (500.0, 2605.115850361733892659),
    (1000.7, 5910.055746911472695758),
    (10000.0, 82099.71749644237727265),
];

/// Largest `x` at which `log Γ(x)` is held to an absolute tolerance; beyond
/// it the f64 spacing of the value itself approaches 1e-13.
pub const LOG_GAMMA_ABS_MAX: f64 = 100.0;

pub fn rel_err(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Composite Simpson rule on `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Golden-section minimizer for unimodal `f` on `[a, b]`.
pub fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// `ν = 1` boundary `arccosh(γ e^{θ/2})² / θ`.
pub fn nu1_boundary(theta: f64, gamma: f64) -> f64 {
    let la = gamma.ln() + 0.5 * theta;
    let ach = la + (1.0 + (-(-2.0 * la).exp_m1()).sqrt()).ln();
    ach * ach / theta
}

/// Central `χ²_ν` density for even `ν` or `ν = 1`, without a gamma-function library.
pub fn central_pdf_closed(y: f64, df: u32) -> f64 {
    if df == 1 {
        return (-0.5 * y).exp() / (2.0 * std::f64::consts::PI * y).sqrt();
    }
    assert!(df.is_multiple_of(2));
    let k = df / 2;
    let fact: f64 = (1..k).map(f64::from).product();
    y.powi(k as i32 - 1) * (-0.5 * y).exp() / (2f64.powi(k as i32) * fact)
}
