//! Minimal legacy-VTK (ASCII structured points) writer.

use std::io::Write;

pub struct StructuredPoints {
    pub dims: [usize; 3],
    pub origin: [f64; 3],
    pub spacing: [f64; 3],
}

pub struct VtkWriter<W: Write> {
    out: W,
    n_points: usize,
}

impl<W: Write> VtkWriter<W> {
    pub fn new(mut out: W, title: &str, grid: &StructuredPoints) -> std::io::Result<Self> {
        let n_points = grid.dims[0] * grid.dims[1] * grid.dims[2];
        writeln!(out, "# vtk DataFile Version 3.0")?;
        writeln!(out, "{title}")?;
        writeln!(out, "ASCII")?;
        writeln!(out, "DATASET STRUCTURED_POINTS")?;
        writeln!(
            out,
            "DIMENSIONS {} {} {}",
            grid.dims[0], grid.dims[1], grid.dims[2]
        )?;
        writeln!(
            out,
            "ORIGIN {} {} {}",
            grid.origin[0], grid.origin[1], grid.origin[2]
        )?;
        writeln!(
            out,
            "SPACING {} {} {}",
            grid.spacing[0], grid.spacing[1], grid.spacing[2]
        )?;
        writeln!(out, "POINT_DATA {n_points}")?;
        Ok(VtkWriter { out, n_points })
    }

    /// Values must be in VTK point order: x fastest, then y, then z.
    pub fn scalars(&mut self, name: &str, values: &[f64]) -> std::io::Result<()> {
        assert_eq!(values.len(), self.n_points);
        writeln!(self.out, "SCALARS {name} double 1")?;
        writeln!(self.out, "LOOKUP_TABLE default")?;
        for v in values {
            writeln!(self.out, "{v:.16e}")?;
        }
        Ok(())
    }

    pub fn vectors(&mut self, name: &str, values: &[[f64; 3]]) -> std::io::Result<()> {
        assert_eq!(values.len(), self.n_points);
        writeln!(self.out, "VECTORS {name} double")?;
        for v in values {
            writeln!(self.out, "{:.16e} {:.16e} {:.16e}", v[0], v[1], v[2])?;
        }
        Ok(())
    }
}
