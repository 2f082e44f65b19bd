use crate::linalg::{ComplexMatrix, HermitianMatrix, RealMatrix, RealSymmetricMatrix};

/// Real representation `[[Re H, −Im H], [Im H, Re H]]` of a Hermitian matrix.
///
/// The spectrum is that of `H` with every multiplicity doubled, so traces read
/// through the embedding must be halved.
pub fn real_embed(h: &HermitianMatrix) -> RealSymmetricMatrix {
    let m = embed_complex(h.matrix());
    RealSymmetricMatrix::new(m).expect("embedding of a finite Hermitian matrix")
}

/// Same embedding for an arbitrary complex matrix; a linear map that preserves products.
pub fn embed_complex(m: &ComplexMatrix) -> RealMatrix {
    let (r, c) = (m.rows(), m.cols());
    RealMatrix::from_fn(2 * r, 2 * c, |i, j| {
        let z = m[(i % r, j % c)];
        match (i < r, j < c) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}
