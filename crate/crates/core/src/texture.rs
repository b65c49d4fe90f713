//! 8-bit texture images and bilinear sampling.

use std::path::Path;

use crate::error::{Error, Result};

/// An RGBA8 image stored row-major, row 0 at the top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextureImage {
    width: u32,
    height: u32,
    pixels: Vec<[u8; 4]>,
}

impl TextureImage {
    pub fn new(width: u32, height: u32, pixels: Vec<[u8; 4]>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument(format!("texture size {width}x{height}")));
        }
        if pixels.len() != (width as usize) * (height as usize) {
            return Err(Error::InvalidArgument(format!(
                "texture {width}x{height} needs {} pixels, got {}",
                width as usize * height as usize,
                pixels.len()
            )));
        }
        Ok(Self { width, height, pixels })
    }

    /// A `width` x `height` image filled with one color.
    pub fn filled(width: u32, height: u32, rgba: [u8; 4]) -> Self {
        let n = (width.max(1) as usize) * (height.max(1) as usize);
        Self { width: width.max(1), height: height.max(1), pixels: vec![rgba; n] }
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> [u8; 4]) -> Self {
        let (width, height) = (width.max(1), height.max(1));
        let mut pixels = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self { width, height, pixels }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[[u8; 4]] {
        &self.pixels
    }

    pub fn pixel(&self, x: u32, y: u32) -> [u8; 4] {
        self.pixels[y as usize * self.width as usize + x as usize]
    }

    pub fn set_pixel(&mut self, x: u32, y: u32, rgba: [u8; 4]) {
        let w = self.width as usize;
        self.pixels[y as usize * w + x as usize] = rgba;
    }

    /// Bilinear sample with repeat addressing.
    ///
    /// `uv = (0, 0)` is the bottom-left corner of the image, so `v` runs
    /// opposite to the row index. Texel `(x, y)` has its center at
    /// `u = (x + 0.5) / width`, `v = 1 - (y + 0.5) / height`.
    pub fn sample(&self, uv: [f64; 2]) -> [f64; 3] {
        let (w, h) = (self.width as i64, self.height as i64);
        let fx = uv[0] * w as f64 - 0.5;
        let fy = (1.0 - uv[1]) * h as f64 - 0.5;
        let x0 = fx.floor();
        let y0 = fy.floor();
        let tx = fx - x0;
        let ty = fy - y0;
        let (x0, y0) = (x0 as i64, y0 as i64);

        let texel = |x: i64, y: i64| -> [f64; 3] {
            let p = self.pixels[(y.rem_euclid(h) * w + x.rem_euclid(w)) as usize];
            [p[0] as f64 / 255.0, p[1] as f64 / 255.0, p[2] as f64 / 255.0]
        };
        let c00 = texel(x0, y0);
        let c10 = texel(x0 + 1, y0);
        let c01 = texel(x0, y0 + 1);
        let c11 = texel(x0 + 1, y0 + 1);
        let mut out = [0.0; 3];
        for k in 0..3 {
            let top = c00[k] + (c10[k] - c00[k]) * tx;
            let bottom = c01[k] + (c11[k] - c01[k]) * tx;
            out[k] = top + (bottom - top) * ty;
        }
        out
    }

    pub fn load_png(path: &Path) -> Result<Self> {
        let img = image::open(path)
            .map_err(|source| Error::Image { path: path.to_path_buf(), source })?
            .to_rgba8();
        let (width, height) = img.dimensions();
        let pixels = img.pixels().map(|p| p.0).collect();
        Self::new(width, height, pixels)
    }

    pub fn save_png(&self, path: &Path) -> Result<()> {
        let mut buf = image::RgbaImage::new(self.width, self.height);
        for (dst, src) in buf.pixels_mut().zip(&self.pixels) {
            dst.0 = *src;
        }
        buf.save_with_format(path, image::ImageFormat::Png)
            .map_err(|source| Error::Image { path: path.to_path_buf(), source })
    }
}

/// Sample `img` at `uv`; see [`TextureImage::sample`].
pub fn sample_texture(img: &TextureImage, uv: [f64; 2]) -> [f64; 3] {
    img.sample(uv)
}

pub(crate) fn to_rgba8(c: [f64; 3]) -> [u8; 4] {
    let q = |x: f64| (x.clamp(0.0, 1.0) * 255.0).round() as u8;
    [q(c[0]), q(c[1]), q(c[2]), 255]
}
