"""Interactive HTML figures for `analyze ... --plot FILE.html`."""
import logging
from pathlib import Path
from typing import Sequence, Union

import plotly.graph_objects as go
from plotly.subplots import make_subplots

from app.services.analysis.bias import CarryBiasResult, carry_table
from app.services.analysis.golomb import GolombReport
from app.services.analysis.linear_complexity import LinearComplexityResult, profile_frame

logger = logging.getLogger(__name__)


def profile_figure(result: LinearComplexityResult) -> go.Figure:
    df = profile_frame(result)
    fig = go.Figure()
    fig.add_trace(go.Scatter(
        x=df['n'],
        y=df['L'],
        mode='lines',
        name='L(n)',
        line=dict(color='#4169E1', width=3, shape='hv')
    ))
    fig.add_trace(go.Scatter(
        x=df['n'],
        y=df['n_half'],
        mode='lines',
        name='n/2',
        line=dict(color='#FFA500', dash='dash')
    ))
    fig.update_layout(
        title=f'Linear Complexity Profile (L = {result.L})',
        xaxis_title='Prefix length n',
        yaxis_title='Linear complexity',
        height=500,
        hovermode='x unified'
    )
    return fig


def golomb_figure(report: GolombReport) -> go.Figure:
    """Run lengths next to the out-of-phase autocorrelation."""
    runs = report.runs_frame()
    fig = make_subplots(rows=1, cols=2, subplot_titles=('Run Lengths', 'Out-of-phase Autocorrelation'))
    for bit, color in ((0, '#4169E1'), (1, '#FF4500')):
        part = runs[runs['bit'] == bit]
        fig.add_trace(go.Bar(x=part['length'], y=part['count'], name=f'runs of {bit}s',
                             marker_color=color), row=1, col=1)
    fig.add_trace(go.Bar(x=list(range(1, report.period)), y=report.autocorrelation, name='C(shift)',
                         marker_color='#90EE90'), row=1, col=2)
    fig.update_xaxes(title_text='Run length', row=1, col=1)
    fig.update_xaxes(title_text='Shift', row=1, col=2)
    fig.update_layout(barmode='group', height=450, title=f'Golomb Postulates (period {report.period})')
    return fig


def carry_figure(results: Sequence[CarryBiasResult]) -> go.Figure:
    df = carry_table(results)
    fig = go.Figure()
    fig.add_trace(go.Scatter(
        x=df['i'], y=df['expected'], mode='lines', name='1/2 + 1/2^(i+1)',
        line=dict(color='#90EE90', width=3)
    ))
    fig.add_trace(go.Scatter(
        x=df['i'], y=df['into'], mode='markers', name='carry into bit i',
        error_y=dict(type='data', array=df['std_error']), marker=dict(size=10)
    ))
    fig.add_trace(go.Scatter(
        x=df['i'], y=df['out'], mode='markers', name='carry out of bit i',
        marker=dict(size=8, symbol='x')
    ))
    fig.update_layout(
        title='Pr[carry = 0]',
        xaxis_title='Bit index i',
        yaxis_title='Probability',
        height=450,
        hovermode='x unified'
    )
    return fig


def write_figure(fig: go.Figure, path: Union[str, Path]) -> Path:
    path = Path(path)
    fig.write_html(str(path), include_plotlyjs='cdn')
    logger.info("Wrote figure to %s", path)
    return path
