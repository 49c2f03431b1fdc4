use crate::error::{Error, Result};
use crate::field::grid::{Field, Grid};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

/// Leading bytes of the binary field dump.
pub const DUMP_MAGIC: &[u8; 4] = b"ZKB1";

/// Little-endian dump: magic, Nx, Ny (u64), Lx, Ly (f64), then row-major f64 samples.
pub fn write_dump(path: impl AsRef<Path>, f: &Field) -> Result<()> {
    let g = &f.grid;
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(DUMP_MAGIC)?;
    w.write_all(&(g.nx as u64).to_le_bytes())?;
    w.write_all(&(g.ny as u64).to_le_bytes())?;
    w.write_all(&g.lx.to_le_bytes())?;
    w.write_all(&g.ly.to_le_bytes())?;
    for v in &f.values {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a dump written by [`write_dump`].
pub fn read_dump(path: impl AsRef<Path>) -> Result<Field> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != DUMP_MAGIC {
        return Err(Error::Io(format!("bad magic {magic:?}")));
    }
    let mut b = [0u8; 8];
    let mut next = |r: &mut BufReader<File>| -> Result<[u8; 8]> {
        r.read_exact(&mut b)?;
        Ok(b)
    };
    let nx = u64::from_le_bytes(next(&mut r)?) as usize;
    let ny = u64::from_le_bytes(next(&mut r)?) as usize;
    let lx = f64::from_le_bytes(next(&mut r)?);
    let ly = f64::from_le_bytes(next(&mut r)?);
    let grid = Grid::new(lx, ly, nx, ny)?;
    let mut values = Vec::with_capacity(nx * ny);
    for _ in 0..nx * ny {
        values.push(f64::from_le_bytes(next(&mut r)?));
    }
    Field::new(&grid, values)
}

/// CSV with header `x,y,value`, one row per sample.
pub fn write_csv(path: impl AsRef<Path>, f: &Field) -> Result<()> {
    let g = &f.grid;
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "x,y,value")?;
    for i in 0..g.nx {
        for j in 0..g.ny {
            writeln!(w, "{},{},{:e}", g.x[i], g.y[j], f.at(i, j))?;
        }
    }
    w.flush()?;
    Ok(())
}
