pub mod adam;
pub mod dual;
pub mod encode;
pub mod io;
pub mod net;
pub mod prior;
pub mod problem;
pub mod rev;
pub mod scalar;
pub mod train;

pub use adam::Adam;
pub use dual::{Dual2, Grad2};
pub use io::{fnv1a64, load_weights, save_weights, WeightFile};
pub use net::Mlp;
pub use prior::{PinnPrior1d, PinnPrior2d};
pub use problem::{SteadyProblem1d, SteadyProblem2d};
pub use rev::{gradient, tape_reset, Rev};
pub use scalar::Scalar;
pub use train::{loss_and_grad_1d, loss_and_grad_2d, train_1d, train_2d, TrainConfig, TrainRecord};
