"""Frozen wavelet filter coefficients.

Generated by ``python3 -m wavecast.filtergen --write``; do not edit
by hand.  Offsets (*_k0) give the integer index of the first tap.
"""

COEFFS = {
    'bior2.8': {
        'orthogonal': False,
        'moments': 2,
        'h_k0': -8,
        'h': [
            0.0015105430506304422,
            -0.0030210861012608843,
            -0.012947511862546647,
            0.02891610982635418,
            0.052998481890690945,
            -0.13491307360773608,
            -0.16382918343409025,
            0.4625714404759166,
            0.9516421218971786,
            0.4625714404759166,
            -0.16382918343409025,
            -0.13491307360773608,
            0.052998481890690945,
            0.02891610982635418,
            -0.012947511862546647,
            -0.0030210861012608843,
            0.0015105430506304422,
        ],
        'ht_k0': -1,
        'ht': [
            0.3535533905932738,
            0.7071067811865476,
            0.3535533905932738,
        ],
    },
    'bior3.7': {
        'orthogonal': False,
        'moments': 3,
        'h_k0': -7,
        'h': [
            0.0030210861012608843,
            -0.009063258303782653,
            -0.01683176542131064,
            0.074663985074019,
            0.03133297870736289,
            -0.301159125922835,
            -0.026499240945345472,
            0.9516421218971786,
            0.9516421218971786,
            -0.026499240945345472,
            -0.301159125922835,
            0.03133297870736289,
            0.074663985074019,
            -0.01683176542131064,
            -0.009063258303782653,
            0.0030210861012608843,
        ],
        'ht_k0': -1,
        'ht': [
            0.1767766952966369,
            0.5303300858899107,
            0.5303300858899107,
            0.1767766952966369,
        ],
    },
    'bior3.9': {
        'orthogonal': False,
        'moments': 3,
        'h_k0': -9,
        'h': [
            -0.000679744372783699,
            0.002039233118351097,
            0.005060319219611981,
            -0.020618912641105536,
            -0.014112787930175846,
            0.09913478249423216,
            0.012300136269419315,
            -0.32019196836077857,
            0.0020500227115698858,
            0.9421257006782068,
            0.9421257006782068,
            0.0020500227115698858,
            -0.32019196836077857,
            0.012300136269419315,
            0.09913478249423216,
            -0.014112787930175846,
            -0.020618912641105536,
            0.005060319219611981,
            0.002039233118351097,
            -0.000679744372783699,
        ],
        'ht_k0': -1,
        'ht': [
            0.1767766952966369,
            0.5303300858899107,
            0.5303300858899107,
            0.1767766952966369,
        ],
    },
    'coif2': {
        'orthogonal': True,
        'moments': 4,
        'h_k0': -4,
        'h': [
            0.016387336463201944,
            -0.041464936786869036,
            -0.06737255472372033,
            0.3861100668227519,
            0.8127236354494096,
            0.4170051844232558,
            -0.0764885990782832,
            -0.0594344186464424,
            0.023680171946852225,
            0.005611434819371801,
            -0.0018232088709125693,
            -0.0007205494455204027,
        ],
        'ht_k0': -4,
        'ht': [
            0.016387336463201944,
            -0.041464936786869036,
            -0.06737255472372033,
            0.3861100668227519,
            0.8127236354494096,
            0.4170051844232558,
            -0.0764885990782832,
            -0.0594344186464424,
            0.023680171946852225,
            0.005611434819371801,
            -0.0018232088709125693,
            -0.0007205494455204027,
        ],
    },
    'db4': {
        'orthogonal': True,
        'moments': 4,
        'h_k0': 0,
        'h': [
            0.23037781330889642,
            0.7148465705529156,
            0.630880767929859,
            -0.027983769416859695,
            -0.1870348117190931,
            0.03084138183556076,
            0.03288301166688525,
            -0.010597401785068994,
        ],
        'ht_k0': 0,
        'ht': [
            0.23037781330889642,
            0.7148465705529156,
            0.630880767929859,
            -0.027983769416859695,
            -0.1870348117190931,
            0.03084138183556076,
            0.03288301166688525,
            -0.010597401785068994,
        ],
    },
    'db6': {
        'orthogonal': True,
        'moments': 6,
        'h_k0': 0,
        'h': [
            0.11154074335010926,
            0.4946238903984525,
            0.7511339080210954,
            0.3152503517091986,
            -0.22626469396543952,
            -0.1297668675672625,
            0.09750160558732306,
            0.027522865530306036,
            -0.031582039317486064,
            0.0005538422011613938,
            0.004777257510945601,
            -0.0010773010853084323,
        ],
        'ht_k0': 0,
        'ht': [
            0.11154074335010926,
            0.4946238903984525,
            0.7511339080210954,
            0.3152503517091986,
            -0.22626469396543952,
            -0.1297668675672625,
            0.09750160558732306,
            0.027522865530306036,
            -0.031582039317486064,
            0.0005538422011613938,
            0.004777257510945601,
            -0.0010773010853084323,
        ],
    },
    'db8': {
        'orthogonal': True,
        'moments': 8,
        'h_k0': 0,
        'h': [
            0.05441584224310392,
            0.3128715909142996,
            0.6756307362972896,
            0.5853546836542073,
            -0.015829105256349063,
            -0.28401554296154696,
            0.00047248457391344044,
            0.12874742662047817,
            -0.01736930100180765,
            -0.04408825393079444,
            0.013981027917398244,
            0.00874609404740565,
            -0.004870352993451508,
            -0.00039174037337693285,
            0.0006754494064505493,
            -0.00011747678412475465,
        ],
        'ht_k0': 0,
        'ht': [
            0.05441584224310392,
            0.3128715909142996,
            0.6756307362972896,
            0.5853546836542073,
            -0.015829105256349063,
            -0.28401554296154696,
            0.00047248457391344044,
            0.12874742662047817,
            -0.01736930100180765,
            -0.04408825393079444,
            0.013981027917398244,
            0.00874609404740565,
            -0.004870352993451508,
            -0.00039174037337693285,
            0.0006754494064505493,
            -0.00011747678412475465,
        ],
    },
    'sym4': {
        'orthogonal': True,
        'moments': 4,
        'h_k0': 0,
        'h': [
            -0.07576571478950223,
            -0.029635527646002618,
            0.49761866763277474,
            0.8037387518051321,
            0.29785779560530623,
            -0.09921954357663341,
            -0.012603967262031364,
            0.032223100604051425,
        ],
        'ht_k0': 0,
        'ht': [
            -0.07576571478950223,
            -0.029635527646002618,
            0.49761866763277474,
            0.8037387518051321,
            0.29785779560530623,
            -0.09921954357663341,
            -0.012603967262031364,
            0.032223100604051425,
        ],
    },
    'sym7': {
        'orthogonal': True,
        'moments': 7,
        'h_k0': 0,
        'h': [
            0.01201541928354814,
            0.01721337630080101,
            -0.06490800354718534,
            -0.06413128980735743,
            0.3602184609063016,
            0.7819215932917333,
            0.4836109156822277,
            -0.05680447688970125,
            -0.10101092086842393,
            0.04474234946835693,
            0.020464207577545482,
            -0.01812660513133905,
            -0.0032832978474660614,
            0.0022918339540540997,
        ],
        'ht_k0': 0,
        'ht': [
            0.01201541928354814,
            0.01721337630080101,
            -0.06490800354718534,
            -0.06413128980735743,
            0.3602184609063016,
            0.7819215932917333,
            0.4836109156822277,
            -0.05680447688970125,
            -0.10101092086842393,
            0.04474234946835693,
            0.020464207577545482,
            -0.01812660513133905,
            -0.0032832978474660614,
            0.0022918339540540997,
        ],
    },
}
