//! A triangulated presentation together with a thick subcategory, and the
//! comma diagrams over each object, enumerated on first use.

use std::sync::{Arc, OnceLock};

use crate::category::{CatPresentation, ObjId};
use crate::colocal::enumerate_subo;
use crate::error::Result;
use crate::fractions::enumerate_wo;
use crate::functor::MorphismDiagram;
use crate::les::{enumerate_tria, TriaDiagram};
use crate::thick::ThickSubcat;

#[derive(Debug)]
pub struct Setting {
    e: ThickSubcat,
    wo: Vec<OnceLock<Arc<MorphismDiagram>>>,
    subo: Vec<OnceLock<Arc<MorphismDiagram>>>,
    tria: Vec<OnceLock<Arc<TriaDiagram>>>,
}

impl Setting {
    pub fn new(e: ThickSubcat) -> Self {
        let n = e.ambient().len();
        Setting {
            e,
            wo: (0..n).map(|_| OnceLock::new()).collect(),
            subo: (0..n).map(|_| OnceLock::new()).collect(),
            tria: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn cat(&self) -> &Arc<CatPresentation> {
        self.e.ambient()
    }

    pub fn thick(&self) -> &ThickSubcat {
        &self.e
    }

    pub fn wo(&self, b: ObjId) -> Result<Arc<MorphismDiagram>> {
        if let Some(d) = self.wo[b].get() {
            return Ok(d.clone());
        }
        let d = Arc::new(enumerate_wo(b, &self.e)?);
        Ok(self.wo[b].get_or_init(|| d).clone())
    }

    pub fn subo(&self, b: ObjId) -> Result<Arc<MorphismDiagram>> {
        if let Some(d) = self.subo[b].get() {
            return Ok(d.clone());
        }
        let d = Arc::new(enumerate_subo(b, &self.e)?);
        Ok(self.subo[b].get_or_init(|| d).clone())
    }

    pub fn tria(&self, b: ObjId) -> Result<Arc<TriaDiagram>> {
        if let Some(d) = self.tria[b].get() {
            return Ok(d.clone());
        }
        let d = Arc::new(enumerate_tria(b, self)?);
        Ok(self.tria[b].get_or_init(|| d).clone())
    }
}
