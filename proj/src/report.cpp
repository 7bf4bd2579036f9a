#include "aerotrack/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include <json.hpp>

namespace aerotrack {

namespace {

using nlohmann::json;

json opt(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

json report_json(const MetricsReport& r) {
    json j;
    j["mota"] = opt(r.mota);
    j["motal"] = opt(r.motal);
    j["motp"] = opt(r.motp);
    j["far"] = opt(r.far);
    j["rcll"] = opt(r.rcll);
    j["prcn"] = opt(r.prcn);
    j["idf1"] = opt(r.idf1);
    j["idp"] = opt(r.idp);
    j["idr"] = opt(r.idr);
    j["mt_pct"] = opt(r.mt_pct);
    j["pt_pct"] = opt(r.pt_pct);
    j["ml_pct"] = opt(r.ml_pct);
    j["mt"] = r.mt;
    j["pt"] = r.pt;
    j["ml"] = r.ml;
    j["ids"] = r.ids;
    j["fm"] = r.fm;
    j["fp"] = r.fp;
    j["fn"] = r.fn;
    j["tp"] = r.tp;
    j["gt_total"] = r.gt_total;
    j["frames"] = r.frames;
    j["gt_trajectories"] = r.gt_trajectories;
    j["idtp"] = r.idtp;
    j["idfp"] = r.idfp;
    j["idfn"] = r.idfn;
    return j;
}

std::string fmt(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

// Percent-style rendering for unit-interval ratios; counts printed plain.
std::string cell_pct(const std::optional<double>& v) {
    return v ? fmt(100.0 * *v, 1) : std::string("-");
}

std::string cell_raw(const std::optional<double>& v, int decimals = 1) {
    return v ? fmt(*v, decimals) : std::string("-");
}

void append_row(std::ostringstream& out, const std::string& name,
               const MetricsReport& r) {
    out << "| " << name << " | " << cell_pct(r.idf1) << " | " << cell_pct(r.idp)
        << " | " << cell_pct(r.idr) << " | " << cell_pct(r.rcll) << " | "
        << cell_pct(r.prcn) << " | " << cell_raw(r.far, 2) << " | "
        << cell_raw(r.mt_pct) << " | " << cell_raw(r.pt_pct) << " | "
        << cell_raw(r.ml_pct) << " | " << r.fp << " | " << r.fn << " | "
        << r.ids << " | " << r.fm << " | " << cell_pct(r.mota) << " | "
        << cell_raw(r.motp) << " | " << cell_pct(r.motal) << " |\n";
}

MetricsReport report_from_json(const json& j) {
    MetricsReport r;
    auto get_opt = [&](const char* k) -> std::optional<double> {
        if (!j.contains(k) || j[k].is_null()) return std::nullopt;
        return j[k].get<double>();
    };
    r.mota = get_opt("mota");
    r.motal = get_opt("motal");
    r.motp = get_opt("motp");
    r.far = get_opt("far");
    r.rcll = get_opt("rcll");
    r.prcn = get_opt("prcn");
    r.idf1 = get_opt("idf1");
    r.idp = get_opt("idp");
    r.idr = get_opt("idr");
    r.mt_pct = get_opt("mt_pct");
    r.pt_pct = get_opt("pt_pct");
    r.ml_pct = get_opt("ml_pct");
    auto get_i = [&](const char* k) {
        return j.contains(k) ? j[k].get<std::int64_t>() : 0;
    };
    r.mt = get_i("mt");
    r.pt = get_i("pt");
    r.ml = get_i("ml");
    r.ids = get_i("ids");
    r.fm = get_i("fm");
    r.fp = get_i("fp");
    r.fn = get_i("fn");
    r.tp = get_i("tp");
    r.gt_total = get_i("gt_total");
    r.frames = get_i("frames");
    r.gt_trajectories = get_i("gt_trajectories");
    r.idtp = get_i("idtp");
    r.idfp = get_i("idfp");
    r.idfn = get_i("idfn");
    return r;
}

}  // namespace

std::string metrics_report_to_json(const MetricsReport& r) {
    return report_json(r).dump(2) + "\n";
}

std::string evaluation_to_json(
    const std::vector<std::pair<std::string, MetricsReport>>& sequences,
    const MetricsReport& total) {
    json j;
    j["sequences"] = json::array();
    for (const auto& [name, r] : sequences) {
        json row = report_json(r);
        row["name"] = name;
        j["sequences"].push_back(row);
    }
    j["total"] = report_json(total);
    return j.dump(2) + "\n";
}

std::string render_markdown_table(
    const std::vector<std::pair<std::string, MetricsReport>>& sequences,
    const MetricsReport& total) {
    std::ostringstream out;
    out << "| Sequence | IDF1 | IDP | IDR | Rcll | Prcn | FAR | MT | PT | ML "
           "| FP | FN | IDS | FM | MOTA | MOTP | MOTAL |\n";
    out << "|---|---|---|---|---|---|---|---|---|---|---|---|---|---|---|---|"
           "---|\n";
    for (const auto& [name, r] : sequences) append_row(out, name, r);
    append_row(out, "total", total);
    return out.str();
}

std::string render_markdown_from_json(const std::string& json_text) {
    const json j = json::parse(json_text);
    std::vector<std::pair<std::string, MetricsReport>> seqs;
    if (j.contains("sequences")) {
        for (const auto& row : j["sequences"]) {
            seqs.emplace_back(row.value("name", std::string("?")),
                              report_from_json(row));
        }
    }
    MetricsReport total =
        j.contains("total") ? report_from_json(j["total"]) : MetricsReport{};
    return render_markdown_table(seqs, total);
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "param,value,seed,ids,fm,fp,fn,mota,idf1\n";
    for (const auto& r : rows) {
        out << r.param << ',' << fmt(r.value, 4) << ',' << r.seed << ','
            << r.report.ids << ',' << r.report.fm << ',' << r.report.fp << ','
            << r.report.fn << ','
            << (r.report.mota ? fmt(*r.report.mota, 6) : "") << ','
            << (r.report.idf1 ? fmt(*r.report.idf1, 6) : "") << '\n';
    }
    return out.str();
}

std::string sweep_to_svg(const std::vector<SweepRow>& rows,
                         const std::string& metric_label) {
    // Seeds are summed per parameter value; one polyline over the values.
    std::map<double, std::int64_t> totals;
    for (const auto& r : rows) totals[r.value] += r.report.ids;

    const double w = 480.0, h = 320.0, ml = 60.0, mb = 40.0, mt = 20.0, mr = 20.0;
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
        << "\" height=\"" << h << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!totals.empty()) {
        double xmin = totals.begin()->first, xmax = totals.rbegin()->first;
        std::int64_t ymax = 1;
        for (const auto& [x, y] : totals) ymax = std::max(ymax, y);
        if (xmax == xmin) xmax = xmin + 1.0;
        auto sx = [&](double x) {
            return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr);
        };
        auto sy = [&](double y) {
            return h - mb - y / double(ymax) * (h - mb - mt);
        };
        out << "<polyline fill=\"none\" stroke=\"black\" points=\"";
        for (const auto& [x, y] : totals) {
            out << fmt(sx(x), 1) << ',' << fmt(sy(double(y)), 1) << ' ';
        }
        out << "\"/>\n";
        for (const auto& [x, y] : totals) {
            out << "<circle cx=\"" << fmt(sx(x), 1) << "\" cy=\""
                << fmt(sy(double(y)), 1) << "\" r=\"3\"/>\n";
            out << "<text x=\"" << fmt(sx(x), 1) << "\" y=\"" << h - mb + 16
                << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(x, 2)
                << "</text>\n";
            out << "<text x=\"" << fmt(sx(x), 1) << "\" y=\""
                << fmt(sy(double(y)) - 6.0, 1)
                << "\" font-size=\"11\" text-anchor=\"middle\">" << y
                << "</text>\n";
        }
        out << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr
            << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
        out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
            << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << (ml + (w - ml - mr) / 2) << "\" y=\"" << h - 8
            << "\" font-size=\"12\" text-anchor=\"middle\">"
            << (rows.empty() ? "param" : rows.front().param) << "</text>\n";
        out << "<text x=\"14\" y=\"" << (mt + (h - mb - mt) / 2)
            << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 "
               "14 "
            << (mt + (h - mb - mt) / 2) << ")\">" << metric_label << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace aerotrack
