//! WebAssembly bindings for the browser demo in `www/`.

pub mod demo;

use wasm_bindgen::prelude::*;

use demo::{boost_view, spectrum_view, DriftParams, DriftingWell};

/// Spectrum of a static Pöschl–Teller well as JSON.
#[wasm_bindgen]
pub fn spectrum(sites: usize, nu: f64, ratio: f64) -> Result<String, JsError> {
    Ok(serde_json::to_string(&spectrum_view(sites, nu, ratio)?)?)
}

/// Boost parameters with E(k) and W(k) samples as JSON.
#[wasm_bindgen]
pub fn boost(v: f64, nu: f64, points: usize) -> Result<String, JsError> {
    Ok(serde_json::to_string(&boost_view(v, nu, points)?)?)
}

#[wasm_bindgen]
pub struct Simulation {
    inner: DriftingWell,
}

#[wasm_bindgen]
impl Simulation {
    #[wasm_bindgen(constructor)]
    pub fn new(nu: f64, velocity: f64, mode: usize, boost: bool) -> Result<Simulation, JsError> {
        let params = DriftParams {
            nu,
            velocity,
            mode,
            boost,
            ..DriftParams::default()
        };
        Ok(Simulation {
            inner: DriftingWell::new(params)?,
        })
    }

    pub fn advance(&mut self, steps: usize) -> Result<(), JsError> {
        Ok(self.inner.advance(steps)?)
    }

    pub fn time(&self) -> f64 {
        self.inner.time()
    }

    #[wasm_bindgen(js_name = halfWidth)]
    pub fn half_width(&self) -> usize {
        self.inner.half_width()
    }

    #[wasm_bindgen(js_name = wellCenter)]
    pub fn well_center(&self) -> f64 {
        self.inner.well_center()
    }

    #[wasm_bindgen(js_name = modeAvailable)]
    pub fn mode_available(&self) -> bool {
        self.inner.mode_available()
    }

    pub fn density(&self) -> Vec<f64> {
        self.inner.density()
    }

    pub fn potential(&self) -> Result<Vec<f64>, JsError> {
        Ok(self.inner.potential()?)
    }

    pub fn norm(&self) -> f64 {
        self.inner.norm()
    }

    #[wasm_bindgen(js_name = localizedFraction)]
    pub fn localized_fraction(&self) -> f64 {
        self.inner.localized_fraction()
    }
}
