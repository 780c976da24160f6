#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace adago::diagnostics {

inline constexpr int kTrajectorySchemaVersion = 1;

/// One logged iteration. Optimizer-side fields (stepsize, v, accum_increment,
/// clamped, floored) describe the lead matrix parameter; gradient norms cover
/// the whole parameter set. grad_norm_nuclear is taken at Θ_{t−1} on the full
/// training set, grad_norm_f is the norm of the gradient the optimizer used.
struct StepRecord {
    std::uint64_t t = 0;
    double train_loss = 0.0;
    std::optional<double> test_loss;
    double grad_norm_f = 0.0;
    double grad_norm_nuclear = 0.0;
    double stepsize = 0.0;
    double v = 0.0;
    double accum_increment = 0.0;
    bool clamped = false;
    bool floored = false;
    double wall_time = 0.0;
};

class Trajectory {
public:
    /// Throws ContractViolation unless record.t exceeds the last t.
    void append(const StepRecord& record);

    const std::vector<StepRecord>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }
    const StepRecord& back() const { return records_.back(); }
    bool has_test_loss() const noexcept;

    /// t strictly increasing and v nondecreasing; throws ContractViolation.
    void validate() const;

private:
    std::vector<StepRecord> records_;
};

/// Columns: schema_version,t,train_loss,test_loss,grad_norm_f,grad_norm_nuclear,
/// stepsize,v,accum_increment,clamped,floored,wall_time. Absent test loss is an
/// empty cell; flags are 0/1.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
Trajectory read_trajectory_csv(std::istream& in);

} // namespace adago::diagnostics
