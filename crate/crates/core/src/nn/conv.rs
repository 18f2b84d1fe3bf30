//! Shape-checked convolutional networks over 2D/3D patches.
//!
//! Layers are drawn from {conv2d, conv3d, relu, maxpool, flatten, dense}
//! with valid padding and configurable stride. The whole net is
//! shape-checked at construction, so a validated spec never produces a
//! runtime shape error in forward.

use super::dense::{relu, relu_backward};
use super::HasParams;
use crate::{CoreError, Result};
use rand::Rng;

/// Dense data with an explicit shape; `[C, D, H, W]` for 3D feature maps,
/// `[C, H, W]` for 2D, `[N]` after flatten.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    pub shape: Vec<usize>,
    pub data: Vec<f64>,
}

impl Tensor {
    pub fn zeros(shape: Vec<usize>) -> Self {
        let n = shape.iter().product();
        Self { shape, data: vec![0.0; n] }
    }

    pub fn from_vec(shape: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        if shape.iter().product::<usize>() != data.len() {
            return Err(CoreError::Shape(format!(
                "tensor data {} != shape {:?}",
                data.len(),
                shape
            )));
        }
        Ok(Self { shape, data })
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum LayerSpec {
    Conv3 { in_ch: usize, out_ch: usize, kernel: usize, stride: usize },
    Conv2 { in_ch: usize, out_ch: usize, kernel: usize, stride: usize },
    Relu,
    MaxPool3 { size: usize },
    MaxPool2 { size: usize },
    Flatten,
    Dense { inp: usize, out: usize },
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ConvNetSpec {
    /// Input shape, `[C, D, H, W]` or `[C, H, W]`.
    pub input: Vec<usize>,
    pub layers: Vec<LayerSpec>,
}

impl ConvNetSpec {
    /// Shape-check the network end to end; returns the shape after every
    /// layer (including the input at position 0).
    pub fn validate(&self) -> Result<Vec<Vec<usize>>> {
        let mut shapes = vec![self.input.clone()];
        let mut cur = self.input.clone();
        if cur.is_empty() || cur.iter().any(|&d| d == 0) {
            return Err(CoreError::Shape(format!("bad input shape {cur:?}")));
        }
        for (li, layer) in self.layers.iter().enumerate() {
            cur = next_shape(&cur, layer)
                .map_err(|e| CoreError::Shape(format!("layer {li} ({layer:?}): {e}")))?;
            shapes.push(cur.clone());
        }
        Ok(shapes)
    }

    pub fn output_dim(&self) -> Result<usize> {
        let shapes = self.validate()?;
        let last = shapes.last().unwrap();
        if last.len() != 1 {
            return Err(CoreError::Shape(format!(
                "network output is not flat: {last:?}"
            )));
        }
        Ok(last[0])
    }
}

fn next_shape(cur: &[usize], layer: &LayerSpec) -> std::result::Result<Vec<usize>, String> {
    match *layer {
        LayerSpec::Conv3 { in_ch, out_ch, kernel, stride } => {
            if cur.len() != 4 {
                return Err(format!("conv3 needs [C,D,H,W] input, got {cur:?}"));
            }
            if cur[0] != in_ch {
                return Err(format!("conv3 in_ch {} != input channels {}", in_ch, cur[0]));
            }
            if stride == 0 || kernel == 0 {
                return Err("zero kernel or stride".into());
            }
            let mut out = vec![out_ch];
            for &d in &cur[1..] {
                if d < kernel {
                    return Err(format!("spatial dim {d} < kernel {kernel}"));
                }
                out.push((d - kernel) / stride + 1);
            }
            Ok(out)
        }
        LayerSpec::Conv2 { in_ch, out_ch, kernel, stride } => {
            if cur.len() != 3 {
                return Err(format!("conv2 needs [C,H,W] input, got {cur:?}"));
            }
            if cur[0] != in_ch {
                return Err(format!("conv2 in_ch {} != input channels {}", in_ch, cur[0]));
            }
            if stride == 0 || kernel == 0 {
                return Err("zero kernel or stride".into());
            }
            let mut out = vec![out_ch];
            for &d in &cur[1..] {
                if d < kernel {
                    return Err(format!("spatial dim {d} < kernel {kernel}"));
                }
                out.push((d - kernel) / stride + 1);
            }
            Ok(out)
        }
        LayerSpec::Relu => Ok(cur.to_vec()),
        LayerSpec::MaxPool3 { size } => {
            if cur.len() != 4 {
                return Err(format!("maxpool3 needs [C,D,H,W] input, got {cur:?}"));
            }
            pool_shape(cur, size)
        }
        LayerSpec::MaxPool2 { size } => {
            if cur.len() != 3 {
                return Err(format!("maxpool2 needs [C,H,W] input, got {cur:?}"));
            }
            pool_shape(cur, size)
        }
        LayerSpec::Flatten => Ok(vec![cur.iter().product()]),
        LayerSpec::Dense { inp, out } => {
            if cur.len() != 1 {
                return Err(format!("dense needs flat input, got {cur:?}"));
            }
            if cur[0] != inp {
                return Err(format!("dense inp {} != input {}", inp, cur[0]));
            }
            Ok(vec![out])
        }
    }
}

fn pool_shape(cur: &[usize], size: usize) -> std::result::Result<Vec<usize>, String> {
    if size == 0 {
        return Err("zero pool size".into());
    }
    let mut out = vec![cur[0]];
    for &d in &cur[1..] {
        if d < size {
            return Err(format!("spatial dim {d} < pool size {size}"));
        }
        out.push(d / size);
    }
    Ok(out)
}

fn param_shapes(layer: &LayerSpec) -> Option<(usize, usize)> {
    match *layer {
        LayerSpec::Conv3 { in_ch, out_ch, kernel, .. } => {
            Some((out_ch * in_ch * kernel * kernel * kernel, out_ch))
        }
        LayerSpec::Conv2 { in_ch, out_ch, kernel, .. } => {
            Some((out_ch * in_ch * kernel * kernel, out_ch))
        }
        LayerSpec::Dense { inp, out } => Some((inp * out, out)),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvNetParams {
    pub spec: ConvNetSpec,
    /// (weights, bias) per parametric layer, in layer order.
    pub tensors: Vec<(Vec<f64>, Vec<f64>)>,
}

pub struct ConvCache {
    /// Input to each layer.
    inputs: Vec<Tensor>,
    /// Flat input index of the max per output element, for pool layers.
    pool_argmax: Vec<Option<Vec<usize>>>,
    pub output: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ConvNetGrads {
    pub tensors: Vec<(Vec<f64>, Vec<f64>)>,
}

impl ConvNetGrads {
    pub fn zeros(params: &ConvNetParams) -> Self {
        Self {
            tensors: params
                .tensors
                .iter()
                .map(|(w, b)| (vec![0.0; w.len()], vec![0.0; b.len()]))
                .collect(),
        }
    }

    pub fn accumulate(&mut self, other: &ConvNetGrads) {
        for (a, b) in self.tensors.iter_mut().zip(&other.tensors) {
            for (x, y) in a.0.iter_mut().zip(&b.0) {
                *x += y;
            }
            for (x, y) in a.1.iter_mut().zip(&b.1) {
                *x += y;
            }
        }
    }

    pub fn into_tensors(self) -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(self.tensors.len() * 2);
        for (w, b) in self.tensors {
            out.push(w);
            out.push(b);
        }
        out
    }
}

impl ConvNetParams {
    pub fn init<R: Rng>(spec: ConvNetSpec, rng: &mut R) -> Result<Self> {
        spec.validate()?;
        let mut tensors = Vec::new();
        for layer in &spec.layers {
            if let Some((nw, nb)) = param_shapes(layer) {
                let fan_in = match *layer {
                    LayerSpec::Conv3 { in_ch, kernel, .. } => in_ch * kernel * kernel * kernel,
                    LayerSpec::Conv2 { in_ch, kernel, .. } => in_ch * kernel * kernel,
                    LayerSpec::Dense { inp, .. } => inp,
                    _ => unreachable!(),
                };
                tensors.push((super::he_uniform(rng, fan_in, nw), vec![0.0; nb]));
            }
        }
        Ok(Self { spec, tensors })
    }

    pub fn output_dim(&self) -> usize {
        self.spec.output_dim().expect("validated at construction")
    }

    pub fn forward(&self, x: Tensor) -> Result<(Vec<f64>, ConvCache)> {
        if x.shape != self.spec.input {
            return Err(CoreError::Shape(format!(
                "conv net input {:?} != spec {:?}",
                x.shape, self.spec.input
            )));
        }
        let mut inputs = Vec::with_capacity(self.spec.layers.len());
        let mut pool_argmax = Vec::with_capacity(self.spec.layers.len());
        let mut cur = x;
        let mut pi = 0usize;
        for layer in &self.spec.layers {
            let mut argmax = None;
            let next = match *layer {
                LayerSpec::Conv3 { out_ch, kernel, stride, .. } => {
                    let (w, b) = &self.tensors[pi];
                    pi += 1;
                    conv3_forward(&cur, w, b, out_ch, kernel, stride)
                }
                LayerSpec::Conv2 { out_ch, kernel, stride, .. } => {
                    let (w, b) = &self.tensors[pi];
                    pi += 1;
                    conv2_forward(&cur, w, b, out_ch, kernel, stride)
                }
                LayerSpec::Relu => {
                    let mut t = cur.clone();
                    relu(&mut t.data);
                    t
                }
                LayerSpec::MaxPool3 { size } => {
                    let (t, am) = pool_forward(&cur, size, 3);
                    argmax = Some(am);
                    t
                }
                LayerSpec::MaxPool2 { size } => {
                    let (t, am) = pool_forward(&cur, size, 2);
                    argmax = Some(am);
                    t
                }
                LayerSpec::Flatten => Tensor {
                    shape: vec![cur.len()],
                    data: cur.data.clone(),
                },
                LayerSpec::Dense { inp, out } => {
                    let (w, b) = &self.tensors[pi];
                    pi += 1;
                    let mut y = b.clone();
                    for (o, yo) in y.iter_mut().enumerate() {
                        let row = &w[o * inp..(o + 1) * inp];
                        let mut acc = 0.0;
                        for (wi, xi) in row.iter().zip(cur.data.iter()) {
                            acc += wi * xi;
                        }
                        *yo += acc;
                    }
                    Tensor { shape: vec![out], data: y }
                }
            };
            inputs.push(cur);
            pool_argmax.push(argmax);
            cur = next;
        }
        let output = cur.data;
        Ok((output, ConvCache { inputs, pool_argmax, output: output_clone(&output) }))
    }

    /// Reverse-mode gradients; returns d(input) alongside parameter grads.
    pub fn backward(&self, cache: &ConvCache, dy: &[f64]) -> Result<(ConvNetGrads, Tensor)> {
        let mut grads = ConvNetGrads::zeros(self);
        let dx = self.backward_into(cache, dy, &mut grads)?;
        Ok((grads, dx))
    }

    pub fn backward_into(
        &self,
        cache: &ConvCache,
        dy: &[f64],
        grads: &mut ConvNetGrads,
    ) -> Result<Tensor> {
        if cache.inputs.len() != self.spec.layers.len() {
            return Err(CoreError::Shape("stale cache: layer count mismatch".into()));
        }
        if dy.len() != cache.output.len() {
            return Err(CoreError::Shape(format!(
                "output grad {} != output {}",
                dy.len(),
                cache.output.len()
            )));
        }
        let mut pi = self.tensors.len();
        let mut d = Tensor {
            shape: vec![dy.len()],
            data: dy.to_vec(),
        };
        for (li, layer) in self.spec.layers.iter().enumerate().rev() {
            let input = &cache.inputs[li];
            d = match *layer {
                LayerSpec::Conv3 { out_ch, kernel, stride, .. } => {
                    pi -= 1;
                    let (w, _) = &self.tensors[pi];
                    let (dw, db) = &mut grads.tensors[pi];
                    conv3_backward(input, w, &d, out_ch, kernel, stride, dw, db)
                }
                LayerSpec::Conv2 { out_ch, kernel, stride, .. } => {
                    pi -= 1;
                    let (w, _) = &self.tensors[pi];
                    let (dw, db) = &mut grads.tensors[pi];
                    conv2_backward(input, w, &d, out_ch, kernel, stride, dw, db)
                }
                LayerSpec::Relu => {
                    let mut t = d;
                    relu_backward(&input.data, &mut t.data);
                    t
                }
                LayerSpec::MaxPool3 { .. } | LayerSpec::MaxPool2 { .. } => {
                    let argmax = cache.pool_argmax[li].as_ref().expect("pool cache");
                    let mut dx = Tensor::zeros(input.shape.clone());
                    for (o, &src) in argmax.iter().enumerate() {
                        dx.data[src] += d.data[o];
                    }
                    dx
                }
                LayerSpec::Flatten => Tensor {
                    shape: input.shape.clone(),
                    data: d.data,
                },
                LayerSpec::Dense { inp, out } => {
                    pi -= 1;
                    let (w, _) = &self.tensors[pi];
                    let (dw, db) = &mut grads.tensors[pi];
                    let mut dx = vec![0.0; inp];
                    for o in 0..out {
                        let g = d.data[o];
                        db[o] += g;
                        let row = &w[o * inp..(o + 1) * inp];
                        let drow = &mut dw[o * inp..(o + 1) * inp];
                        for i in 0..inp {
                            drow[i] += g * input.data[i];
                            dx[i] += g * row[i];
                        }
                    }
                    Tensor { shape: vec![inp], data: dx }
                }
            };
        }
        Ok(d)
    }
}

fn output_clone(v: &[f64]) -> Vec<f64> {
    v.to_vec()
}

impl HasParams for ConvNetParams {
    fn params(&self) -> Vec<&Vec<f64>> {
        let mut out = Vec::with_capacity(self.tensors.len() * 2);
        for (w, b) in &self.tensors {
            out.push(w);
            out.push(b);
        }
        out
    }

    fn params_mut(&mut self) -> Vec<&mut Vec<f64>> {
        let mut out = Vec::with_capacity(self.tensors.len() * 2);
        for (w, b) in &mut self.tensors {
            out.push(w);
            out.push(b);
        }
        out
    }
}

fn conv3_forward(
    x: &Tensor,
    w: &[f64],
    b: &[f64],
    out_ch: usize,
    k: usize,
    s: usize,
) -> Tensor {
    let (ic, d, h, wd) = (x.shape[0], x.shape[1], x.shape[2], x.shape[3]);
    let od = (d - k) / s + 1;
    let oh = (h - k) / s + 1;
    let ow = (wd - k) / s + 1;
    let mut out = Tensor::zeros(vec![out_ch, od, oh, ow]);
    let ostride_c = od * oh * ow;
    for oc in 0..out_ch {
        let out_c = &mut out.data[oc * ostride_c..(oc + 1) * ostride_c];
        out_c.iter_mut().for_each(|v| *v = b[oc]);
        for c in 0..ic {
            let x_c = &x.data[c * d * h * wd..(c + 1) * d * h * wd];
            for kd in 0..k {
                for kh in 0..k {
                    for kw in 0..k {
                        let wv = w[(((oc * ic + c) * k + kd) * k + kh) * k + kw];
                        for zd in 0..od {
                            let id = zd * s + kd;
                            for zh in 0..oh {
                                let ih = zh * s + kh;
                                let xrow = &x_c[(id * h + ih) * wd + kw..];
                                let orow = &mut out_c[(zd * oh + zh) * ow..(zd * oh + zh) * ow + ow];
                                if s == 1 {
                                    for (o, xv) in orow.iter_mut().zip(xrow.iter()) {
                                        *o += wv * xv;
                                    }
                                } else {
                                    for (zw, o) in orow.iter_mut().enumerate() {
                                        *o += wv * xrow[zw * s];
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn conv3_backward(
    x: &Tensor,
    w: &[f64],
    dy: &Tensor,
    out_ch: usize,
    k: usize,
    s: usize,
    dw: &mut [f64],
    db: &mut [f64],
) -> Tensor {
    let (ic, d, h, wd) = (x.shape[0], x.shape[1], x.shape[2], x.shape[3]);
    let (od, oh, ow) = (dy.shape[1], dy.shape[2], dy.shape[3]);
    let mut dx = Tensor::zeros(x.shape.clone());
    let ostride_c = od * oh * ow;
    for oc in 0..out_ch {
        let dy_c = &dy.data[oc * ostride_c..(oc + 1) * ostride_c];
        db[oc] += dy_c.iter().sum::<f64>();
        for c in 0..ic {
            let x_c = &x.data[c * d * h * wd..(c + 1) * d * h * wd];
            let dx_c = &mut dx.data[c * d * h * wd..(c + 1) * d * h * wd];
            for kd in 0..k {
                for kh in 0..k {
                    for kw in 0..k {
                        let widx = (((oc * ic + c) * k + kd) * k + kh) * k + kw;
                        let wv = w[widx];
                        let mut wacc = 0.0;
                        for zd in 0..od {
                            let id = zd * s + kd;
                            for zh in 0..oh {
                                let ih = zh * s + kh;
                                let base = (id * h + ih) * wd + kw;
                                let dyrow = &dy_c[(zd * oh + zh) * ow..(zd * oh + zh) * ow + ow];
                                if s == 1 {
                                    let xrow = &x_c[base..base + ow];
                                    let dxrow = &mut dx_c[base..base + ow];
                                    for ((g, xv), dxv) in
                                        dyrow.iter().zip(xrow.iter()).zip(dxrow.iter_mut())
                                    {
                                        wacc += g * xv;
                                        *dxv += wv * g;
                                    }
                                } else {
                                    for (zw, &g) in dyrow.iter().enumerate() {
                                        wacc += g * x_c[base + zw * s];
                                        dx_c[base + zw * s] += wv * g;
                                    }
                                }
                            }
                        }
                        dw[widx] += wacc;
                    }
                }
            }
        }
    }
    dx
}

fn conv2_forward(
    x: &Tensor,
    w: &[f64],
    b: &[f64],
    out_ch: usize,
    k: usize,
    s: usize,
) -> Tensor {
    let (ic, h, wd) = (x.shape[0], x.shape[1], x.shape[2]);
    let oh = (h - k) / s + 1;
    let ow = (wd - k) / s + 1;
    let mut out = Tensor::zeros(vec![out_ch, oh, ow]);
    let ostride_c = oh * ow;
    for oc in 0..out_ch {
        let out_c = &mut out.data[oc * ostride_c..(oc + 1) * ostride_c];
        out_c.iter_mut().for_each(|v| *v = b[oc]);
        for c in 0..ic {
            let x_c = &x.data[c * h * wd..(c + 1) * h * wd];
            for kh in 0..k {
                for kw in 0..k {
                    let wv = w[((oc * ic + c) * k + kh) * k + kw];
                    for zh in 0..oh {
                        let ih = zh * s + kh;
                        let xrow = &x_c[ih * wd + kw..];
                        let orow = &mut out_c[zh * ow..zh * ow + ow];
                        if s == 1 {
                            for (o, xv) in orow.iter_mut().zip(xrow.iter()) {
                                *o += wv * xv;
                            }
                        } else {
                            for (zw, o) in orow.iter_mut().enumerate() {
                                *o += wv * xrow[zw * s];
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn conv2_backward(
    x: &Tensor,
    w: &[f64],
    dy: &Tensor,
    out_ch: usize,
    k: usize,
    s: usize,
    dw: &mut [f64],
    db: &mut [f64],
) -> Tensor {
    let (ic, h, wd) = (x.shape[0], x.shape[1], x.shape[2]);
    let (oh, ow) = (dy.shape[1], dy.shape[2]);
    let mut dx = Tensor::zeros(x.shape.clone());
    let ostride_c = oh * ow;
    for oc in 0..out_ch {
        let dy_c = &dy.data[oc * ostride_c..(oc + 1) * ostride_c];
        db[oc] += dy_c.iter().sum::<f64>();
        for c in 0..ic {
            let x_c = &x.data[c * h * wd..(c + 1) * h * wd];
            let dx_c = &mut dx.data[c * h * wd..(c + 1) * h * wd];
            for kh in 0..k {
                for kw in 0..k {
                    let widx = ((oc * ic + c) * k + kh) * k + kw;
                    let wv = w[widx];
                    let mut wacc = 0.0;
                    for zh in 0..oh {
                        let ih = zh * s + kh;
                        let base = ih * wd + kw;
                        let dyrow = &dy_c[zh * ow..zh * ow + ow];
                        if s == 1 {
                            let xrow = &x_c[base..base + ow];
                            let dxrow = &mut dx_c[base..base + ow];
                            for ((g, xv), dxv) in
                                dyrow.iter().zip(xrow.iter()).zip(dxrow.iter_mut())
                            {
                                wacc += g * xv;
                                *dxv += wv * g;
                            }
                        } else {
                            for (zw, &g) in dyrow.iter().enumerate() {
                                wacc += g * x_c[base + zw * s];
                                dx_c[base + zw * s] += wv * g;
                            }
                        }
                    }
                    dw[widx] += wacc;
                }
            }
        }
    }
    dx
}

/// Max pooling over non-overlapping windows; ties go to the first element in
/// scan order. Returns the pooled tensor and per-output argmax (flat input
/// index).
fn pool_forward(x: &Tensor, size: usize, spatial: usize) -> (Tensor, Vec<usize>) {
    let ch = x.shape[0];
    let in_dims = &x.shape[1..];
    let out_dims: Vec<usize> = in_dims.iter().map(|&d| d / size).collect();
    let mut shape = vec![ch];
    shape.extend_from_slice(&out_dims);
    let mut out = Tensor::zeros(shape);
    let mut argmax = vec![0usize; out.len()];

    let in_spatial: usize = in_dims.iter().product();
    let out_spatial: usize = out_dims.iter().product();

    for c in 0..ch {
        let x_c = &x.data[c * in_spatial..(c + 1) * in_spatial];
        for o in 0..out_spatial {
            // Decompose the flat output index into spatial coords.
            let mut rem = o;
            let mut ocoord = vec![0usize; spatial];
            for d in (0..spatial).rev() {
                ocoord[d] = rem % out_dims[d];
                rem /= out_dims[d];
            }
            let mut best = f64::NEG_INFINITY;
            let mut best_idx = 0usize;
            let win: usize = size.pow(spatial as u32);
            for wiv in 0..win {
                let mut rem = wiv;
                let mut flat = 0usize;
                for d in 0..spatial {
                    let step = size.pow((spatial - 1 - d) as u32);
                    let off = rem / step;
                    rem %= step;
                    flat = flat * in_dims[d] + (ocoord[d] * size + off);
                }
                let v = x_c[flat];
                if v > best {
                    best = v;
                    best_idx = flat;
                }
            }
            out.data[c * out_spatial + o] = best;
            argmax[c * out_spatial + o] = c * in_spatial + best_idx;
        }
    }
    (out, argmax)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_1x1x1_kernel_passes_channel_through() {
        let spec = ConvNetSpec {
            input: vec![1, 3, 3, 3],
            layers: vec![LayerSpec::Conv3 { in_ch: 1, out_ch: 1, kernel: 1, stride: 1 }],
        };
        let mut p = ConvNetParams::init(spec, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        p.tensors[0].0 = vec![1.0];
        p.tensors[0].1 = vec![0.0];
        let x = Tensor::from_vec(vec![1, 3, 3, 3], (0..27).map(f64::from).collect()).unwrap();
        let (y, _) = p.forward(x.clone()).unwrap();
        assert_eq!(y, x.data);
    }

    #[test]
    fn all_ones_2cube_kernel_sums_eight_voxels() {
        let spec = ConvNetSpec {
            input: vec![1, 4, 4, 4],
            layers: vec![LayerSpec::Conv3 { in_ch: 1, out_ch: 1, kernel: 2, stride: 1 }],
        };
        let mut p = ConvNetParams::init(spec, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        p.tensors[0].0 = vec![1.0; 8];
        p.tensors[0].1 = vec![0.0];
        let x = Tensor::from_vec(vec![1, 4, 4, 4], vec![1.0; 64]).unwrap();
        let (y, _) = p.forward(x).unwrap();
        assert_eq!(y.len(), 27);
        assert!(y.iter().all(|&v| v == 8.0));
    }

    #[test]
    fn spec_validation_flags_mismatches() {
        let bad_ch = ConvNetSpec {
            input: vec![2, 8, 8, 8],
            layers: vec![LayerSpec::Conv3 { in_ch: 1, out_ch: 4, kernel: 3, stride: 1 }],
        };
        assert!(bad_ch.validate().is_err());

        let bad_dense = ConvNetSpec {
            input: vec![1, 8, 8],
            layers: vec![
                LayerSpec::Conv2 { in_ch: 1, out_ch: 2, kernel: 3, stride: 1 },
                LayerSpec::Flatten,
                LayerSpec::Dense { inp: 10, out: 3 },
            ],
        };
        assert!(bad_dense.validate().is_err());
    }

    #[test]
    fn shapes_walk_as_expected() {
        let spec = ConvNetSpec {
            input: vec![1, 16, 16, 16],
            layers: vec![
                LayerSpec::Conv3 { in_ch: 1, out_ch: 4, kernel: 3, stride: 2 },
                LayerSpec::Relu,
                LayerSpec::MaxPool3 { size: 2 },
                LayerSpec::Flatten,
                LayerSpec::Dense { inp: 4 * 3 * 3 * 3, out: 6 },
            ],
        };
        let shapes = spec.validate().unwrap();
        assert_eq!(shapes[1], vec![4, 7, 7, 7]);
        assert_eq!(shapes[3], vec![4, 3, 3, 3]);
        assert_eq!(spec.output_dim().unwrap(), 6);
    }

    #[test]
    fn maxpool_routes_gradient_to_argmax() {
        let spec = ConvNetSpec {
            input: vec![1, 2, 2],
            layers: vec![LayerSpec::MaxPool2 { size: 2 }, LayerSpec::Flatten],
        };
        let p = ConvNetParams::init(spec, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        let x = Tensor::from_vec(vec![1, 2, 2], vec![1.0, 4.0, 2.0, 3.0]).unwrap();
        let (y, cache) = p.forward(x).unwrap();
        assert_eq!(y, vec![4.0]);
        let (_, dx) = p.backward(&cache, &[1.0]).unwrap();
        assert_eq!(dx.data, vec![0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn forward_rejects_wrong_input_shape() {
        let spec = ConvNetSpec {
            input: vec![1, 4, 4, 4],
            layers: vec![LayerSpec::Flatten],
        };
        let p = ConvNetParams::init(spec, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        let x = Tensor::zeros(vec![1, 4, 4]);
        assert!(p.forward(x).is_err());
    }
}
