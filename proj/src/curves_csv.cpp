#include <algorithm>
#include <tuple>

#include "misalign/format.hpp"
#include "misalign/scenario_io.hpp"

namespace misalign {

namespace {

struct Row {
    std::string experiment;
    std::string series;
    CurvePoint point;
};

}  // namespace

std::string write_curves_csv(std::span<const ExperimentCurve> curves)
{
    std::vector<Row> rows;
    for (const auto& curve : curves) {
        const std::string series = curve.series_key();
        for (const auto& p : curve.points) rows.push_back({curve.experiment, series, p});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return std::tie(a.series, a.point.x) < std::tie(b.series, b.point.x);
    });

    std::string out = "experiment,series,x,mean,std,runs\n";
    for (const auto& row : rows) {
        out += csv_field(row.experiment);
        out += ',';
        out += csv_field(row.series);
        out += ',';
        out += format_significant(row.point.x, 10);
        out += ',';
        out += format_significant(row.point.mean, 10);
        out += ',';
        out += format_significant(row.point.std, 10);
        out += ',';
        out += std::to_string(row.point.runs);
        out += '\n';
    }
    return out;
}

}  // namespace misalign
