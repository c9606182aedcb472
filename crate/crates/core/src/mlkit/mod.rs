//! Logistic regression, ROC analysis, stratified cross-validation and pixel correlations.

mod cv;
mod data;
mod logreg;
mod metrics;

pub use cv::{cross_validate, kfold_cv, stratified_folds, CvReport, Scorer, Trainer};
pub use data::{standardize_fit, Dataset, Row, Standardization};
pub use logreg::{
    logreg_predict, logreg_train, logreg_train_traced, loss_and_gradient, sigmoid, LogRegConfig,
    LogRegModel, LossGrad, TrainingTrace,
};
pub use metrics::{
    pearson, pearson_pixel_map, roc_auc, Correlation, PixelCorrelationMap, RocCurve, RocPoint,
};
