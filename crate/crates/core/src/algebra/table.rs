//! Structure constants and the 8x8 basis product table.

/// Signed index triples of the totally antisymmetric tensor `f`.
const F_TRIPLES: [[usize; 3]; 4] = [[1, 2, 3], [2, 4, 6], [3, 6, 5], [4, 1, 5]];

/// Index triples of the totally symmetric tensor `l`, each carrying `-1`.
const L_TRIPLES: [[usize; 3]; 3] = [[1, 7, 6], [2, 5, 7], [3, 4, 7]];

/// The two rank-3 tensors fixing the product of `ζ1..ζ7`.
///
/// `f` is totally antisymmetric, `l` totally symmetric. Index 0 is unused and
/// all its entries vanish.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructureTensors {
    f: [[[i8; 8]; 8]; 8],
    l: [[[i8; 8]; 8]; 8],
}

impl StructureTensors {
    const fn build() -> Self {
        let mut f = [[[0i8; 8]; 8]; 8];
        let mut l = [[[0i8; 8]; 8]; 8];
        let mut t = 0;
        while t < F_TRIPLES.len() {
            let [i, j, k] = F_TRIPLES[t];
            f[i][j][k] = 1;
            f[j][k][i] = 1;
            f[k][i][j] = 1;
            f[j][i][k] = -1;
            f[i][k][j] = -1;
            f[k][j][i] = -1;
            t += 1;
        }
        t = 0;
        while t < L_TRIPLES.len() {
            let [i, j, k] = L_TRIPLES[t];
            l[i][j][k] = -1;
            l[j][k][i] = -1;
            l[k][i][j] = -1;
            l[j][i][k] = -1;
            l[i][k][j] = -1;
            l[k][j][i] = -1;
            t += 1;
        }
        Self { f, l }
    }

    /// `f_{μνρ}`. Indices must be below 8.
    pub const fn f(&self, mu: usize, nu: usize, rho: usize) -> i8 {
        self.f[mu][nu][rho]
    }

    /// `l_{μνρ}`. Indices must be below 8.
    pub const fn l(&self, mu: usize, nu: usize, rho: usize) -> i8 {
        self.l[mu][nu][rho]
    }
}

/// The structure tensors of the algebra.
pub const STRUCTURE: StructureTensors = StructureTensors::build();

/// Result of multiplying two basis elements: `ζμ ζν = sign · λ^oriented · ζ_index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisProduct {
    /// Sign at `λ = +1`.
    pub sign: i8,
    /// Index of the resulting basis element.
    pub index: u8,
    /// Whether the result carries an extra factor of `λ`.
    pub oriented: bool,
}

impl BasisProduct {
    /// Sign of the product under orientation sign `lambda`.
    pub const fn sign_for(self, lambda: i8) -> i8 {
        if self.oriented {
            self.sign * lambda
        } else {
            self.sign
        }
    }
}

const fn product_entry(mu: usize, nu: usize) -> BasisProduct {
    if mu == 0 {
        return BasisProduct { sign: 1, index: nu as u8, oriented: false };
    }
    if nu == 0 {
        return BasisProduct { sign: 1, index: mu as u8, oriented: false };
    }
    if mu == nu {
        let sign = if mu == 7 { 1 } else { -1 };
        return BasisProduct { sign, index: 0, oriented: false };
    }
    let mut found = BasisProduct { sign: 0, index: 0, oriented: true };
    let mut rho = 1;
    while rho < 8 {
        let l_sign = if rho == 7 { -1 } else { 1 };
        let c = STRUCTURE.f(mu, nu, rho) + l_sign * STRUCTURE.l(mu, nu, rho);
        if c != 0 {
            assert!(found.sign == 0, "product of two basis elements has two components");
            assert!(c == 1 || c == -1, "structure coefficient out of range");
            found = BasisProduct { sign: c, index: rho as u8, oriented: true };
        }
        rho += 1;
    }
    assert!(found.sign != 0, "product of two distinct basis elements vanished");
    found
}

const fn build_table() -> [[BasisProduct; 8]; 8] {
    let mut table = [[BasisProduct { sign: 0, index: 0, oriented: false }; 8]; 8];
    let mut mu = 0;
    while mu < 8 {
        let mut nu = 0;
        while nu < 8 {
            table[mu][nu] = product_entry(mu, nu);
            nu += 1;
        }
        mu += 1;
    }
    table
}

/// `PRODUCT_TABLE[μ][ν]` describes `ζμ ζν`.
pub const PRODUCT_TABLE: [[BasisProduct; 8]; 8] = build_table();

/// The multiplication table written in geometric symbols.
///
/// Row and column `k` are the basis elements `ζk`. Entries use
/// `exey, ezex, eyez, exeinf, eyeinf, ezeinf, I3einf` for the bare blades,
/// a leading `λ` for the orientation factor and a leading `-` for sign.
/// Kept as text so it can be checked independently of [`PRODUCT_TABLE`].
pub const REFERENCE_TABLE: [[&str; 8]; 8] = [
    ["1", "λexey", "λezex", "λeyez", "λexeinf", "λeyeinf", "λezeinf", "λI3einf"],
    ["λexey", "-1", "eyez", "-ezex", "-eyeinf", "exeinf", "I3einf", "-ezeinf"],
    ["λezex", "-eyez", "-1", "exey", "ezeinf", "I3einf", "-exeinf", "-eyeinf"],
    ["λeyez", "ezex", "-exey", "-1", "I3einf", "-ezeinf", "eyeinf", "-exeinf"],
    ["λexeinf", "eyeinf", "-ezeinf", "I3einf", "-1", "-exey", "ezex", "-eyez"],
    ["λeyeinf", "-exeinf", "I3einf", "ezeinf", "exey", "-1", "-eyez", "-ezex"],
    ["λezeinf", "I3einf", "exeinf", "-eyeinf", "-ezex", "eyez", "-1", "-exey"],
    ["λI3einf", "-ezeinf", "-eyeinf", "-exeinf", "-eyez", "-ezex", "-exey", "1"],
];

/// A parsed [`REFERENCE_TABLE`] entry: `sign · (λ if prefixed) · blade`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReferenceEntry {
    /// Leading sign.
    pub sign: i8,
    /// Whether the entry is written with an explicit `λ`.
    pub lambda_prefixed: bool,
    /// Blade index: 0 for the scalar, `k` for the bare blade inside `ζk`.
    pub blade: u8,
}

impl ReferenceEntry {
    /// Parses one table cell. Returns `None` on unknown symbols.
    pub fn parse(cell: &str) -> Option<Self> {
        let (sign, rest) = match cell.strip_prefix('-') {
            Some(r) => (-1, r),
            None => (1, cell),
        };
        let (lambda_prefixed, rest) = match rest.strip_prefix('λ') {
            Some(r) => (true, r),
            None => (false, rest),
        };
        let blade = match rest {
            "1" => 0,
            "exey" => 1,
            "ezex" => 2,
            "eyez" => 3,
            "exeinf" => 4,
            "eyeinf" => 5,
            "ezeinf" => 6,
            "I3einf" => 7,
            _ => return None,
        };
        Some(Self { sign, lambda_prefixed, blade })
    }

    /// Rewrites the entry in the `ζ` basis under orientation sign `lambda`.
    ///
    /// A bare blade `b_k` equals `λ ζk`, so an unprefixed non-scalar entry
    /// picks up one factor of `λ`.
    pub fn in_zeta_basis(self, lambda: i8) -> (i8, u8) {
        let carries = self.blade != 0 && !self.lambda_prefixed;
        let sign = if carries { self.sign * lambda } else { self.sign };
        (sign, self.blade)
    }
}
