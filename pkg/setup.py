from setuptools import setup, find_packages

from poi_core.version import get_version

setup(
    name='django-poi-core',
    version=get_version(),
    description="Next point-of-interest recommendation core with recency-aware popularity.",
    keywords='django, recommender systems, point of interest, transformer, graph convolution',
    license='LGPL',
    package_dir={'poi_core': 'poi_core'},
    include_package_data=True,
    packages=find_packages(exclude=('example',)),
    package_data={'poi_core': ['tests/data/*.tsv']},
    classifiers=[
        'Development Status :: 4 - Beta',
        'Environment :: Console',
        'Framework :: Django',
        'Intended Audience :: Developers',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: GNU LESSER GENERAL PUBLIC LICENSE (LGPL)',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Artificial Intelligence',
    ],
    install_requires=[
        'django>=3.2',
        'python-dateutil>=2.2',
        'pytz',
        'numpy>=1.20',
        'factory-boy>=2.5.0',
    ],
    zip_safe=False
)
