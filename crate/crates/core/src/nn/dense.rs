//! Fully-connected layer shared by the MLP and conv-net heads.

use rand::Rng;

/// Dense layer with weights stored row-major as `w[out * inp]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub inp: usize,
    pub out: usize,
    pub w: Vec<f64>,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct DenseGrad {
    pub dw: Vec<f64>,
    pub db: Vec<f64>,
}

impl Dense {
    pub fn he_init<R: Rng>(rng: &mut R, inp: usize, out: usize) -> Self {
        Self {
            inp,
            out,
            w: super::he_uniform(rng, inp, inp * out),
            b: vec![0.0; out],
        }
    }

    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.inp);
        let mut y = self.b.clone();
        for (o, yo) in y.iter_mut().enumerate() {
            let row = &self.w[o * self.inp..(o + 1) * self.inp];
            let mut acc = 0.0;
            for (wi, xi) in row.iter().zip(x.iter()) {
                acc += wi * xi;
            }
            *yo += acc;
        }
        y
    }

    /// Gradients given the layer input and upstream dy; returns dx.
    pub fn backward(&self, x: &[f64], dy: &[f64], grad: &mut DenseGrad) -> Vec<f64> {
        debug_assert_eq!(dy.len(), self.out);
        let mut dx = vec![0.0; self.inp];
        for (o, &g) in dy.iter().enumerate() {
            grad.db[o] += g;
            let row = &self.w[o * self.inp..(o + 1) * self.inp];
            let drow = &mut grad.dw[o * self.inp..(o + 1) * self.inp];
            for i in 0..self.inp {
                drow[i] += g * x[i];
                dx[i] += g * row[i];
            }
        }
        dx
    }

    pub fn zero_grad(&self) -> DenseGrad {
        DenseGrad {
            dw: vec![0.0; self.w.len()],
            db: vec![0.0; self.b.len()],
        }
    }
}

pub(crate) fn relu(x: &mut [f64]) {
    for v in x.iter_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
}

/// Zero the upstream gradient wherever the pre-activation was <= 0.
pub(crate) fn relu_backward(pre: &[f64], dy: &mut [f64]) {
    for (d, &p) in dy.iter_mut().zip(pre.iter()) {
        if p <= 0.0 {
            *d = 0.0;
        }
    }
}
