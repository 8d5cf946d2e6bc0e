pub mod poly;
pub mod blowup;
pub mod catalog;
pub mod ideal;
pub mod mcm;
pub mod polymat;
