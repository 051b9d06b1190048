#include <funsub/metrics.hpp>

#include <funsub/error.hpp>

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <iterator>

namespace funsub
{

classification_scores classification_metrics( confusion_counts const& c )
{
  if ( c.total() == 0 )
    throw error( "metrics of empty counts" );
  classification_scores s;
  s.accuracy = static_cast<double>( c.tp + c.tn ) / static_cast<double>( c.total() );
  if ( c.tp + c.fp == 0 )
    s.precision_degenerate = true;
  else
    s.precision = static_cast<double>( c.tp ) / static_cast<double>( c.tp + c.fp );
  if ( c.tp + c.fn == 0 )
    s.recall_degenerate = true;
  else
    s.recall = static_cast<double>( c.tp ) / static_cast<double>( c.tp + c.fn );
  if ( s.precision + s.recall > 0 )
    s.f1 = 2 * s.precision * s.recall / ( s.precision + s.recall );
  return s;
}

void tally( confusion_counts& c, bool predicted, bool actual ) noexcept
{
  if ( predicted )
    ++( actual ? c.tp : c.fp );
  else
    ++( actual ? c.fn : c.tn );
}

segmentation_scores segmentation_metrics( std::set<std::uint32_t> const& predicted,
                                          std::set<std::uint32_t> const& ground_truth )
{
  if ( predicted.empty() && ground_truth.empty() )
    throw error( "undefined: both node sets are empty" );
  std::vector<std::uint32_t> common;
  std::set_intersection( predicted.begin(), predicted.end(), ground_truth.begin(), ground_truth.end(),
                         std::back_inserter( common ) );
  auto const inter = static_cast<double>( common.size() );
  auto const uni = static_cast<double>( predicted.size() + ground_truth.size() - common.size() );
  return { inter / uni, 2 * inter / static_cast<double>( predicted.size() + ground_truth.size() ) };
}

std::vector<double> parse_predictions( std::string_view text )
{
  std::vector<double> preds;
  std::size_t line = 0;
  std::size_t pos = 0;
  while ( pos < text.size() )
  {
    ++line;
    auto end = text.find( '\n', pos );
    if ( end == std::string_view::npos )
      end = text.size();
    auto field = text.substr( pos, end - pos );
    while ( !field.empty() && ( field.back() == '\r' || field.back() == ' ' || field.back() == '\t' ) )
      field.remove_suffix( 1 );
    while ( !field.empty() && ( field.front() == ' ' || field.front() == '\t' ) )
      field.remove_prefix( 1 );
    double value = 0;
    auto const [ptr, ec] = std::from_chars( field.data(), field.data() + field.size(), value );
    if ( field.empty() || ec != std::errc{} || ptr != field.data() + field.size() )
      throw parse_error( fmt::format( "bad prediction '{}'", field ), line );
    if ( !( value >= 0.0 && value <= 1.0 ) )
      throw parse_error( fmt::format( "prediction {} outside [0, 1]", value ), line );
    preds.push_back( value );
    pos = end + 1;
  }
  return preds;
}

eval_report evaluate_stage1( std::vector<double> const& preds, std::vector<int> const& labels, double threshold )
{
  if ( preds.size() != labels.size() )
    throw error( fmt::format( "{} predictions for {} records", preds.size(), labels.size() ) );
  eval_report r;
  r.stage = 1;
  r.threshold = threshold;
  r.records = labels.size();
  for ( std::size_t i = 0; i < preds.size(); ++i )
    tally( r.counts, preds[i] >= threshold, labels[i] == 1 );
  r.classification = classification_metrics( r.counts );
  return r;
}

eval_report evaluate_stage2( std::vector<double> const& preds, std::vector<std::vector<int>> const& labels,
                             double threshold )
{
  std::size_t cells = 0;
  for ( auto const& l : labels )
    cells += l.size();
  if ( preds.size() != cells )
    throw error( fmt::format( "{} predictions for {} cells in {} records", preds.size(), cells, labels.size() ) );
  if ( labels.empty() )
    throw error( "no records to evaluate" );

  eval_report r;
  r.stage = 2;
  r.threshold = threshold;
  r.records = labels.size();
  r.cells = cells;
  std::size_t offset = 0;
  for ( std::size_t k = 0; k < labels.size(); ++k )
  {
    std::set<std::uint32_t> predicted, truth;
    for ( std::uint32_t i = 0; i < labels[k].size(); ++i )
    {
      if ( preds[offset + i] >= threshold )
        predicted.insert( i );
      if ( labels[k][i] == 1 )
        truth.insert( i );
    }
    offset += labels[k].size();
    try
    {
      auto const s = segmentation_metrics( predicted, truth );
      r.segmentation.iou += s.iou;
      r.segmentation.dice += s.dice;
    }
    catch ( error const& e )
    {
      throw error( fmt::format( "record {}: {}", k, e.what() ) );
    }
  }
  r.segmentation.iou /= static_cast<double>( labels.size() );
  r.segmentation.dice /= static_cast<double>( labels.size() );
  return r;
}

std::string write_report( eval_report const& r )
{
  nlohmann::ordered_json j;
  j["stage"] = r.stage;
  j["threshold"] = r.threshold;
  j["records"] = r.records;
  if ( r.stage == 1 )
  {
    j["counts"] = { { "tp", r.counts.tp }, { "tn", r.counts.tn }, { "fp", r.counts.fp }, { "fn", r.counts.fn } };
    j["metrics"] = { { "accuracy", r.classification.accuracy },
                     { "precision", r.classification.precision },
                     { "recall", r.classification.recall },
                     { "f1", r.classification.f1 } };
    j["degenerate"] = { { "precision", r.classification.precision_degenerate },
                        { "recall", r.classification.recall_degenerate } };
  }
  else
  {
    j["cells"] = r.cells;
    j["metrics"] = { { "iou", r.segmentation.iou }, { "dice", r.segmentation.dice } };
  }
  return j.dump( 2 ) + '\n';
}

} // namespace funsub
