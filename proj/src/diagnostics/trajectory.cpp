#include "adago/diagnostics/trajectory.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "adago/errors.hpp"

namespace adago::diagnostics {
namespace {

constexpr const char* kHeader =
    "schema_version,t,train_loss,test_loss,grad_norm_f,grad_norm_nuclear,stepsize,v,accum_increment,"
    "clamped,floored,wall_time";
constexpr std::size_t kColumns = 12;

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_double(const std::string& cell, std::size_t line) {
    try {
        std::size_t used = 0;
        const double x = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        return x;
    } catch (const std::exception&) {
        throw InvalidInput("trajectory CSV: bad number '" + cell + "' on line " + std::to_string(line));
    }
}

} // namespace

void Trajectory::append(const StepRecord& record) {
    if (!records_.empty() && record.t <= records_.back().t)
        throw ContractViolation("Trajectory::append: t must be strictly increasing");
    records_.push_back(record);
}

bool Trajectory::has_test_loss() const noexcept {
    for (const auto& r : records_)
        if (r.test_loss) return true;
    return false;
}

void Trajectory::validate() const {
    for (std::size_t i = 1; i < records_.size(); ++i) {
        if (records_[i].t <= records_[i - 1].t)
            throw ContractViolation("trajectory: t not strictly increasing at record " + std::to_string(i));
        if (records_[i].v < records_[i - 1].v)
            throw ContractViolation("trajectory: v decreased at t=" + std::to_string(records_[i].t));
    }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << kHeader << '\n';
    for (const auto& r : traj.records()) {
        out << kTrajectorySchemaVersion << ',' << r.t << ',' << fmt(r.train_loss) << ','
            << (r.test_loss ? fmt(*r.test_loss) : std::string()) << ',' << fmt(r.grad_norm_f) << ','
            << fmt(r.grad_norm_nuclear) << ',' << fmt(r.stepsize) << ',' << fmt(r.v) << ','
            << fmt(r.accum_increment) << ',' << (r.clamped ? 1 : 0) << ',' << (r.floored ? 1 : 0) << ','
            << fmt(r.wall_time) << '\n';
    }
}

Trajectory read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kHeader) throw InvalidInput("trajectory CSV: unexpected header");
    Trajectory traj;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream fields(line);
        std::string cell;
        while (std::getline(fields, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        if (cells.size() != kColumns)
            throw InvalidInput("trajectory CSV: wrong column count on line " + std::to_string(line_no));
        if (cells[0] != std::to_string(kTrajectorySchemaVersion))
            throw InvalidInput("trajectory CSV: unsupported schema version " + cells[0]);
        StepRecord r;
        r.t = static_cast<std::uint64_t>(parse_double(cells[1], line_no));
        r.train_loss = parse_double(cells[2], line_no);
        if (!cells[3].empty()) r.test_loss = parse_double(cells[3], line_no);
        r.grad_norm_f = parse_double(cells[4], line_no);
        r.grad_norm_nuclear = parse_double(cells[5], line_no);
        r.stepsize = parse_double(cells[6], line_no);
        r.v = parse_double(cells[7], line_no);
        r.accum_increment = parse_double(cells[8], line_no);
        r.clamped = cells[9] == "1";
        r.floored = cells[10] == "1";
        r.wall_time = parse_double(cells[11], line_no);
        traj.append(r);
    }
    return traj;
}

} // namespace adago::diagnostics
