"""
Visualization module for creating interactive profile charts.

This module provides a function to draw the per-replicate dyadic profiles
of one statistic with plotly, for reports opened in a browser.
"""

from typing import Dict, Sequence

import numpy as np
import plotly.graph_objects as go

from .svg import log2_series, mean_series


def create_profile_chart(statistic: str, replicate_values: Dict[int, Sequence[float]]) -> str:
    """
    Create an interactive chart of log2 statistic against the level j.

    Args:
        statistic: Statistic name (chart title)
        replicate_values: Replicate index to per-level values

    Returns:
        HTML string containing the plotly chart
    """
    traces = []
    series = []
    for replicate, values in sorted(replicate_values.items()):
        y = log2_series(values)
        series.append(y)
        traces.append(go.Scatter(
            x=np.arange(len(y)).tolist(),
            y=[None if not np.isfinite(v) else float(v) for v in y],
            mode='lines+markers',
            line=dict(color='rgba(108, 117, 125, 0.6)', width=1),
            marker=dict(size=4),
            name=f'replicate {replicate}',
            hovertemplate='j=%{x}<br>log2=%{y:.3f}<extra></extra>'
        ))

    mean = mean_series(series)
    traces.append(go.Scatter(
        x=np.arange(len(mean)).tolist(),
        y=[None if not np.isfinite(v) else float(v) for v in mean],
        mode='lines',
        line=dict(color='#dc3545', width=3),
        name='mean',
        hovertemplate='j=%{x}<br>mean log2=%{y:.3f}<extra></extra>'
    ))

    fig = go.Figure(data=traces)
    fig.update_layout(
        title={
            'text': statistic,
            'x': 0.5,
            'xanchor': 'center',
            'font': {'size': 20}
        },
        xaxis=dict(
            title='Level j',
            dtick=1,
            gridcolor='rgba(200, 200, 200, 0.3)'
        ),
        yaxis=dict(
            title=f'log2 {statistic}',
            gridcolor='rgba(200, 200, 200, 0.3)'
        ),
        plot_bgcolor='white',
        hovermode='closest',
        showlegend=True,
        width=1000,
        height=600
    )

    return fig.to_html(
        include_plotlyjs='cdn',
        div_id=f'profile-{statistic}',
        config={
            'displayModeBar': True,
            'displaylogo': False,
            'modeBarButtonsToRemove': ['lasso2d', 'select2d']
        }
    )
