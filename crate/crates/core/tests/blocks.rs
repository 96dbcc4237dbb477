use hodge_core::graded::{homology, BilinearForm, DgSpace, GradedSpace, Parity, Symmetry};
use hodge_core::hodge::{build_harmonious, decompose, verify};
use hodge_core::matrix::Matrix;
use hodge_core::samples;
use Parity::{Even, Odd};

struct Block {
    parities: Vec<Parity>,
    d: Matrix,
    gram: Matrix,
}

/// Zero-form contractible pair, nondegenerate contractible pair, nondegenerate pair with d = 0.
fn blocks() -> Vec<Block> {
    vec![
        Block {
            parities: vec![Even, Odd],
            d: Matrix::from_i64(&[&[0, 1], &[0, 0]]),
            gram: Matrix::zeros(2, 2),
        },
        Block {
            parities: vec![Even, Odd],
            d: Matrix::from_i64(&[&[0, 1], &[0, 0]]),
            gram: Matrix::from_i64(&[&[0, 1], &[1, 0]]),
        },
        Block {
            parities: vec![Even, Odd],
            d: Matrix::zeros(2, 2),
            gram: Matrix::from_i64(&[&[0, 1], &[1, 0]]),
        },
    ]
}

fn block_sum(blocks: &[Block]) -> (DgSpace, BilinearForm) {
    let parities: Vec<Parity> = blocks.iter().flat_map(|b| b.parities.clone()).collect();
    let n = parities.len();
    let (mut d, mut g) = (Matrix::zeros(n, n), Matrix::zeros(n, n));
    let mut offset = 0;
    for b in blocks {
        let k = b.parities.len();
        for i in 0..k {
            for j in 0..k {
                d[(offset + i, offset + j)] = b.d[(i, j)].clone();
                g[(offset + i, offset + j)] = b.gram[(i, j)].clone();
            }
        }
        offset += k;
    }
    let space = GradedSpace::from_parities(&parities);
    (
        DgSpace::new(space.clone(), d).unwrap(),
        BilinearForm::new(space, Odd, Symmetry::Symmetric, g).unwrap(),
    )
}

fn block_betti(b: &Block) -> usize {
    let v = DgSpace::new(GradedSpace::from_parities(&b.parities), b.d.clone()).unwrap();
    homology(&v).representatives.dim()
}

#[test]
fn mixed_block_sum_has_harmonic_part_of_betti_dimension() {
    let blocks = blocks();
    let expected: usize = blocks.iter().map(block_betti).sum();
    assert_eq!(expected, 2);
    let (v, b) = block_sum(&blocks);
    let mut rng = samples::rng(2);
    for round in 0..5 {
        let (v, b) = if round == 0 {
            (v.clone(), b.clone())
        } else {
            let p = samples::change_of_basis(&mut rng, v.space());
            (
                samples::conjugate(&v, &p).unwrap(),
                samples::transform_form(&b, &p).unwrap(),
            )
        };
        let h = build_harmonious(&v, &b).unwrap();
        assert!(verify(&h, &v, &b).unwrap().passes());
        let dec = decompose(&h, &v).unwrap();
        assert_eq!(dec.harmonic.dim(), expected);
        assert_eq!(dec.boundaries.dim(), 2);
        assert_eq!(dec.isotropic.dim(), 2);
    }
}

#[test]
fn each_block_solves_on_its_own() {
    for block in blocks() {
        let (v, b) = block_sum(std::slice::from_ref(&block));
        let h = build_harmonious(&v, &b).unwrap();
        assert!(verify(&h, &v, &b).unwrap().passes());
        assert_eq!(
            decompose(&h, &v).unwrap().harmonic.dim(),
            block_betti(&block)
        );
    }
}
